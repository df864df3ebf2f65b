import sys

from ns2d_bdf2.cli import main

sys.exit(main())
