import sys

from crpd.cli import main

if __name__ == "__main__":
    sys.exit(main())
