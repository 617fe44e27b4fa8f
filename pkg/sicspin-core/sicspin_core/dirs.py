"""Per-user directories. Experiment outputs never go here, only to an explicit output directory."""
import sys
from pathlib import Path
from typing import Optional, Union

import platformdirs

APPNAME = "sicspin"


def ensure_dir(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def get_log_dir(subdir: Optional[str] = None) -> str:  # pragma: no cover
    # platformdirs >= 2.6 puts user_log_path under XDG_STATE_HOME; Linux logs stay in the cache dir
    if sys.platform.startswith("linux"):
        base = platformdirs.user_cache_path(APPNAME) / "log"
    else:
        base = platformdirs.user_log_path(APPNAME)
    return str(ensure_dir(base / subdir if subdir else base))
