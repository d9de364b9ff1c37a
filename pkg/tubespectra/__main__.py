#!/usr/bin/env python3

# libraries
import sys

from .cli import main

# execute
sys.exit(main())
