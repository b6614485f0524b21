import django.dispatch

obstruction_found = django.dispatch.Signal()
"""
When :func:`thurston.obstruction.search_obstruction` reports a verified
stable obstruction.

        providing_args=["map", "multicurve", "matrix"]
"""

levy_cycle_found = django.dispatch.Signal()
"""
When :func:`thurston.obstruction.detect_levy` finds a Levy cycle.

        providing_args=["map", "witness"]
"""

budget_exhausted = django.dispatch.Signal()
"""
When a budgeted search gives up, either by returning an inconclusive
result or by raising :class:`thurston.exceptions.BudgetExceeded`.

        providing_args=["operation", "budget"]
"""
