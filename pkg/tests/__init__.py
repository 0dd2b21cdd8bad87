"""
Test package for Turyn-Storer Audit.

Unit tests cover the sequence core and the Theorem 1 checks, search tests
cover the counterexample finder and the Barker search, and integration
tests drive the command line.
"""
