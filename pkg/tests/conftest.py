import sys
from pathlib import Path

# Make test-support modules (golden8, helpers) importable.
sys.path.insert(0, str(Path(__file__).parent))
