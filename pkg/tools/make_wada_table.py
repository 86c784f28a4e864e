"""Regenerate the blind-SNR lookup table embedded in ttsds/_wada_table.py.

Model: an observed sample is speech plus independent Gaussian noise. Speech
amplitudes follow a two-sided gamma density with shape 0.4, scaled to unit
power; noise power is 10**(-snr/10). For each integer SNR in [-20, 100] dB
this computes the value of the statistic

    g(snr) = ln E|z| - E[ln |z|]

Conditional on a speech amplitude s, the observation is N(s, sigma**2): its
folded mean is closed-form, and its log-magnitude mean is a Poisson mixture
of digamma values (z**2 is noncentral chi-square with 1 degree of freedom).
The outer expectation over s uses adaptive quadrature split at the noise
scale, with the s**(alpha-1) endpoint singularity handled analytically.

g is strictly increasing in snr, so linear interpolation of its inverse
recovers an SNR estimate from the observed statistic. Usage:

    python tools/make_wada_table.py > src/ttsds/_wada_table.py
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

ALPHA = 0.4
BETA = math.sqrt(ALPHA * (ALPHA + 1.0))  # unit speech power
SNR_DB = np.arange(-20, 101)


def log_abs_normal_mean(m: float) -> float:
    """E[ln |N(m, 1)|] for m >= 0.

    z**2 is a Poisson(m**2/2) mixture of chi-square(1 + 2j) variables and
    E[ln chi2_k] = ln 2 + digamma(k/2), so the mixture sum is exact. Above
    m = 30 the Taylor expansion of ln|m + u| in u/m is cheaper and accurate
    to ~1e-9.
    """
    if m > 30.0:
        m2 = m * m
        return math.log(m) - 1.0 / (2.0 * m2) - 3.0 / (4.0 * m2 * m2)
    lam = 0.5 * m * m
    if lam == 0.0:
        return 0.5 * (math.log(2.0) + special.digamma(0.5))
    j_hi = int(lam + 40.0 * math.sqrt(lam + 1.0) + 25.0)
    j = np.arange(j_hi + 1)
    log_pois = j * math.log(lam) - lam - special.gammaln(j + 1.0)
    mix = np.exp(log_pois) @ special.digamma(j + 0.5)
    return 0.5 * (math.log(2.0) + float(mix))


def folded_normal_mean(m: float, sigma: float) -> float:
    """E[|N(m, sigma**2)|] for m >= 0."""
    return sigma * math.sqrt(2.0 / math.pi) * math.exp(
        -0.5 * (m / sigma) ** 2
    ) + m * math.erf(m / (sigma * math.sqrt(2.0)))


def gamma_amplitude_expect(f, sigma: float) -> float:
    """E[f(s)] for s ~ Gamma(shape ALPHA, rate BETA).

    Split at the noise scale (f varies fastest around s ~ sigma) and at 1;
    the first piece hands the s**(ALPHA-1) singularity to the quadrature as
    an algebraic weight.
    """
    prefactor = BETA**ALPHA / math.gamma(ALPHA)
    knee = min(1.0, 50.0 * sigma)

    def damped(s: float) -> float:
        return math.exp(-BETA * s) * f(s)

    def full(s: float) -> float:
        return s ** (ALPHA - 1.0) * damped(s)

    head, _ = integrate.quad(
        damped, 0.0, knee, weight="alg", wvar=(ALPHA - 1.0, 0.0), limit=400
    )
    mid = 0.0
    if knee < 1.0:
        mid, _ = integrate.quad(full, knee, 1.0, limit=400)
    tail, _ = integrate.quad(full, 1.0, np.inf, limit=400)
    return prefactor * (head + mid + tail)


def statistic(snr_db: float) -> float:
    sigma = math.sqrt(10.0 ** (-snr_db / 10.0))
    mean_abs = gamma_amplitude_expect(lambda s: folded_normal_mean(s, sigma), sigma)
    mean_log = math.log(sigma) + gamma_amplitude_expect(
        lambda s: log_abs_normal_mean(s / sigma), sigma
    )
    return math.log(mean_abs) - mean_log


def main() -> None:
    values = [statistic(float(db)) for db in SNR_DB]

    # closed-form limits bracket the table
    pure_noise = 0.5 * (-math.log(math.pi) - special.digamma(0.5))
    pure_speech = (
        math.log(ALPHA / BETA) - special.digamma(ALPHA) + math.log(BETA)
    )
    assert pure_noise < values[0] < values[-1] < pure_speech, (
        pure_noise,
        values[0],
        values[-1],
        pure_speech,
    )
    diffs = np.diff(values)
    assert (diffs > 0).all(), "table must be strictly increasing"

    print('"""Lookup table for the blind SNR estimator. Generated file.')
    print()
    print("Regenerate with: python tools/make_wada_table.py")
    print('"""')
    print()
    print("SNR_DB_MIN = -20.0")
    print("SNR_DB_MAX = 100.0")
    print()
    print("# g(snr) = ln E|z| - E[ln |z|] for integer snr in [-20, 100] dB,")
    print("# strictly increasing; see tools/make_wada_table.py for the model.")
    print("G_VALUES = (")
    for i in range(0, len(values), 4):
        row = ", ".join(f"{v!r}" for v in values[i : i + 4])
        print(f"    {row},")
    print(")")


if __name__ == "__main__":
    main()
