"""Shared pytest setup: the modules under ``src/`` are imported by bare name."""

import sys
from pathlib import Path

# Add src/ to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))
