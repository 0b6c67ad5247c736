"""Equilibrium states at exponent 2: cylinders, Gibbs bounds, entropy.

Builds the eigenmatrix data for three built-ins and prints the cylinder
distribution with its consistency and Gibbs diagnostics.
"""

from thermoform import core, kusuoka, registry


def word_label(word):
    return ",".join(str(s) for s in word)


def show(name, n_show=2, n_check=8):
    t = registry.get_builtin(name)
    kd = kusuoka.kusuoka_measure(t)
    print("== %s ==" % name)
    print("pressure      %.12f" % kd.pressure_value)
    print("residuals     pullback %.2e  pushforward %.2e"
          % (kd.residuals["pullback"], kd.residuals["pushforward"]))
    table = kusuoka.cylinder_table(kd, n_show)
    for n in range(1, n_show + 1):
        level = table.level(n)
        parts = ["[%s] %.6f" % (word_label(w), level[k])
                 for k, w in enumerate(core.enumerate_words(t.size, n))]
        print("length %d      %s" % (n, "  ".join(parts)))
    print("consistency   %.2e (stationarity and total mass, n <= %d)"
          % (kusuoka.consistency_check(kd, n_check), n_check))
    gibbs = kusuoka.gibbs_verify(kd, n_check)
    print("gibbs         ratios [%.6f, %.6f] inside [%.6f, %.6f]: %s"
          % (gibbs.min_ratio, gibbs.max_ratio, gibbs.c_lower, gibbs.c_upper,
             gibbs.ok))
    est = kusuoka.entropy_estimate(kd, n_check)
    print("entropy       conditional %.6f  variational %.6f  top lyapunov %.6f"
          % (est.conditional[-1], est.variational[-1],
             kusuoka.lyapunov_top(kd, n_check)[-1]))
    print()


def main():
    for name in ("notmix2", "alpha(3/5,4/5)", "nilpotent2"):
        show(name)
    print("the nilpotent pair charges only the two alternating words:")
    kd = kusuoka.kusuoka_measure(registry.get_builtin("nilpotent2"))
    for word in ((1, 2, 1, 2), (2, 1, 2, 1), (1, 1, 2, 1), (2, 2, 2, 2)):
        print("  mu([%s]) = %.6f" % (word_label(word),
                                     kusuoka.cylinder_measure(kd, word)))


if __name__ == "__main__":
    main()
