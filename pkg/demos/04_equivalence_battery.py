"""
Three tests, one answer
=======================

Run a small battery of slant and non-slant profiles through all three
characterizations and print the agreement table.
"""

from frenet4.battery import build_battery, format_report, run_battery

items = build_battery(n_slant=6, n_nonslant=6, seed=3)
results = run_battery(items)
print(format_report(results))
