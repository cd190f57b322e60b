"""
main.py — Entry point for JordanCone
"""
import sys
import os

# Allow imports from project root
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from jordan_cone.cli.main import main


if __name__ == "__main__":
    sys.exit(main())
