import sys

from qgls.cli import main

sys.exit(main())
