import os
import sys

import mpmath

from pencils import config

sys.path.insert(0, os.path.dirname(__file__))

# test constants such as sqrt(3) must be built at the working precision
mpmath.mp.prec = config.DEFAULT_PRECISION
