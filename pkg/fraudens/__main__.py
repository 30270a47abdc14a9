import sys

from fraudens.cli import main

sys.exit(main())
