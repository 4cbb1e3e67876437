import os
import sys

try:
    import homoclinic_lab  # noqa: F401
except ImportError:
    sys.path.insert(
        0, os.path.join(os.path.dirname(__file__), os.pardir, "src"))
