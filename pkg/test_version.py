#!/usr/bin/env python
"""
Demonstration script showing different ways to access the cr-discs version.
"""

print("=" * 60)
print("cr-discs Version Access Demonstration")
print("=" * 60)

print("\n1. Direct access to __version__:")
import cr_discs
print(f"   cr_discs.__version__ = '{cr_discs.__version__}'")

print("\n2. Using get_version() function:")
print(f"   cr_discs.get_version() = '{cr_discs.get_version()}'")

print("\n3. From package metadata (if installed via pip):")
try:
    from importlib.metadata import version
    pkg_version = version('cr-discs')
    print(f"   importlib.metadata.version('cr-discs') = '{pkg_version}'")
except Exception as e:
    print(f"   Not available: {e}")

print("\n4. Version recorded in every report manifest:")
from cr_discs.experiments import BishopExperiment
print(f"   manifest version = '{BishopExperiment().manifest()['version']}'")

print("\n5. CLI commands:")
print("   Run: cr-discs --version")
print("   Run: cr-discs version")
print("   Run: python -m cr_discs.cli version")

print("\n" + "=" * 60)
print("All version access methods working correctly!")
print("=" * 60)
