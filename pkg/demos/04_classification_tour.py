"""One classification report per built-in, with the headline verdicts.

Shows how the same scan separates the zero-entropy pair, the
non-Bernoulli weighted pair, the conformal-adjacent families, and the
deliberately reducible input.
"""

import warnings

from thermoform import classify, registry

NAMES = ["notmix2", "nilpotent2", "alpha(3/5,4/5)", "rankone4", "eps(1)",
         "reducible2"]


def describe(report):
    print("== %s ==" % report.source_label)
    if report.irreducibility is not None:
        verdict = ("reducible (witness dim %d)"
                   % report.irreducibility.witness.dim
                   if report.irreducibility.reducible else
                   "no invariant subspace found")
        print("  irreducibility   %s" % verdict)
    if report.zero_word is not None:
        print("  zero product     word %s" % (report.zero_word,))
    if report.zero_entropy is not None:
        ps = report.zero_entropy
        print("  zero entropy     period %d, block rank %d, word %s"
              % (ps.period, ps.block_rank, ps.word))
    if report.bernoulli is not None:
        pair = report.bernoulli.counterexample
        if pair is None:
            print("  multiplicative   holds up to the word budget "
                  "(Bernoulli evidence)")
        else:
            print("  multiplicative   fails: rho(%s * %s) = %.6f vs %.6f"
                  % (pair.first, pair.second, pair.product_radius,
                     pair.split_radius))
    if report.conformal is not None:
        if report.conformal.is_conformal:
            print("  conformal        yes, residual %.2e"
                  % report.conformal.residual)
        else:
            print("  conformal        no (%s)" % report.conformal.reason)
    if report.s_independence is not None:
        rate = report.s_independence.exponent_rate
        if rate is None:
            print("  radius rates     split: %s vs %s"
                  % (report.s_independence.low_witness,
                     report.s_independence.high_witness))
        else:
            print("  radius rates     all nonzero words share rate %.6f"
                  % rate)
    if report.maximal_entropy is not None and report.maximal_entropy.is_maximal:
        print("  cylinders        uniform Bernoulli (maximal entropy)")
    print("  mixing           %s" % report.mixing_assessment)
    for key, exc in sorted(report.errors.items()):
        print("  [failed: %s] %s" % (key, exc))
    print()


def main():
    for name in NAMES:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = classify.classification_report(registry.get_builtin(name))
        describe(report)


if __name__ == "__main__":
    main()
