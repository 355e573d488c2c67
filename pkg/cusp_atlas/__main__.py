import sys

from cusp_atlas.cli.main import main

sys.exit(main())
