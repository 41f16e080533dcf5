import sys

from kleekit.cli import main

sys.exit(main())
