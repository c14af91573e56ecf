import sys

from trialbf.cli import main

sys.exit(main())
