"""Allow running as `python -m hardylab`."""
from hardylab.cli import main

main()
