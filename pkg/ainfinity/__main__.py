import sys

sys.exit("Nothing to run in the 'ainfinity' module. Did you mean 'ainfinity.cli'?")
