import sys

from asymboost.main import main

sys.exit(main())
