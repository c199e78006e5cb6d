"""Run the built-in oracle and bound checks and print the report."""

from cbcdbd.selfcheck import format_report, run_self_check

print(format_report(run_self_check("quick")))
