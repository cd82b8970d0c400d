import sys

from symfid.cli import main

sys.exit(main())
