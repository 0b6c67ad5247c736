"""Period-two oscillation of correlations for the non-mixing pair.

The joint measure mu([1] cap shift^-n [1]) never settles at mu([1])^2;
it alternates between 0.16 and 0.34 while the Cesaro averages converge.
A small deformation of the same pair destroys the effect.
"""

from thermoform import kusuoka, registry


def correlation_row(kd, n_max):
    mu1 = kusuoka.cylinder_measure(kd, (1,))
    rows = []
    for gap in range(1, n_max + 1):
        joint = kusuoka.correlation(kd, (1,), (1,), gap)
        rows.append((gap, joint, joint - mu1 * mu1))
    return mu1, rows


def main():
    notmix = registry.get_builtin("notmix2")
    kd = kusuoka.kusuoka_measure(notmix)
    mu1, rows = correlation_row(kd, 20)
    print("== notmix2: mu([1]) = %.4f, product value %.4f ==" % (mu1,
                                                                 mu1 * mu1))
    print("%4s %12s %12s" % ("gap", "joint", "deviation"))
    for gap, joint, dev in rows:
        print("%4d %12.8f %+12.8f" % (gap, joint, dev))
    cesaro = sum(joint for _, joint, _ in rows) / len(rows)
    print("cesaro average %.8f (deviation %+.2e)"
          % (cesaro, cesaro - mu1 * mu1))

    per = kusuoka.peripheral_spectrum(notmix)
    print("peripheral spectrum of the doubled sum: %s -> %s"
          % ([complex(round(z.real, 9), round(z.imag, 9))
              for z in per.values], per.verdict))
    print()

    eps = registry.get_builtin("eps(1/4)")
    kd_eps = kusuoka.kusuoka_measure(eps)
    mu1, rows = correlation_row(kd_eps, 20)
    print("== eps(1/4): the deformation mixes ==")
    for gap, joint, dev in rows[-5:]:
        print("%4d %12.8f %+12.8f" % (gap, joint, dev))
    per = kusuoka.peripheral_spectrum(eps)
    print("peripheral spectrum: %s -> %s"
          % ([complex(round(z.real, 9), round(z.imag, 9))
              for z in per.values], per.verdict))


if __name__ == "__main__":
    main()
