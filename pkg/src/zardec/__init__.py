"""zardec: exact Zariski decompositions of divisors.

Classical decompositions on abstract surfaces, and their birational
(b-divisor) analogue realized on towers of toric models: separating
blow-ups, mobile parts, and polytope-valued positive parts.  All
arithmetic is exact rational.
"""

__version__ = "0.1.0"
