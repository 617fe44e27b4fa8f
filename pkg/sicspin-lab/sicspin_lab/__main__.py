import sys

from sicspin_lab.main import run

if __name__ == "__main__":
    sys.exit(run())
