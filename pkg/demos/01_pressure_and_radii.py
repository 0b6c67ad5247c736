"""Pressure brackets and radius enclosures for the built-in tuples.

Walks the certified upper/lower series at a few exponents and shows
where the exact even-exponent values land inside the brackets.
"""

import math

from thermoform import pressure, registry

NAMES = ["notmix2", "nilpotent2", "alpha(3/5,4/5)", "rankone4", "eps(1)"]


def show_bracket(name, s, depth):
    t = registry.get_builtin(name)
    bracket = pressure.pressure_bracket(t, s, depth)
    print("%-16s s=%-4s depth=%d" % (name, s, depth))
    print("  upper  %+.12f" % bracket.upper)
    print("  lower  %+.12f  (best periodic word bound)"
          % bracket.periodic_lower)
    if bracket.exact is not None:
        inside = bracket.contains(bracket.exact, slack=1e-9)
        print("  exact  %+.12f  inside bracket: %s"
              % (bracket.exact, inside))
    print("  width  %.3e" % bracket.width())


def main():
    print("== pressure brackets at s = 2 ==")
    for name in NAMES:
        show_bracket(name, 2, 8)
    print()
    print("== an odd exponent only brackets, never collapses ==")
    show_bracket("notmix2", 3, 8)
    print()
    print("== joint spectral radius closes at depth 2 for both pairs ==")
    for name in ("notmix2", "nilpotent2"):
        b = pressure.jsr_bracket(registry.get_builtin(name), 2)
        print("%-12s JSR in [%.12f, %.12f]" % (name, b.lower, b.upper))
    print()
    print("== p-radius of notmix2 ==")
    for p in (2, 4):
        r = pressure.p_radius(registry.get_builtin("notmix2"), p, 6)
        tag = "exact" if r.exact else "bracket"
        print("p=%d  [%.12f, %.12f]  (%s)" % (p, r.lower, r.upper, tag))
    print()
    print("reference values: log 5 = %.12f, sqrt 5 = %.12f"
          % (math.log(5), math.sqrt(5)))


if __name__ == "__main__":
    main()
