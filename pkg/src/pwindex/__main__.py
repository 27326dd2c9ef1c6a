import sys

from pwindex.cli import main

sys.exit(main())
