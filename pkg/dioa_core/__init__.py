# This file turns the 'dioa_core' directory into a Python package.
# Modules are imported directly (e.g. `from dioa_core.sioa import Sioa`).
