import sys
from pathlib import Path

# dev_scripts/ imports the package from the repo root.
sys.path.insert(0, str(Path(__file__).parent))
