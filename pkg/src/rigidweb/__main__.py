import sys

from rigidweb.cli import main

sys.exit(main())
