# Copyright 2026 The chirpdd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference values for the unit and acceptance tests.

Computed with mpmath at 30 digits, independently of the C++ code, and
frozen into tests/oracle_values.hpp:

    python3 tests/oracles/generate.py > tests/oracle_values.hpp
"""

import mpmath as mp

mp.mp.dps = 30
TWO_PI = 2 * mp.pi
MHZ = TWO_PI * mp.mpf(10) ** 6
KHZ = TWO_PI * mp.mpf(10) ** 3
US = mp.mpf(10) ** -6

out = []


def emit(name, value):
    out.append(f"inline constexpr double {name} = {mp.nstr(value, 17, strip_zeros=False)};")


def comment(text):
    out.append("")
    out.append(f"// {text}")


# log-Gamma, principal branch of the continuous loggamma.
comment("log Gamma(z), real and imaginary parts")
LGAMMA_POINTS = [
    ("a", mp.mpc(0.3, 0.7)),
    ("b", mp.mpc(2.5, -1.2)),
    ("c", mp.mpc(0.1, 5.0)),
    ("d", mp.mpc(7.0, 0.5)),
    ("e", mp.mpc(-0.7, 0.3)),
    ("f", mp.mpc(0.5, 40.0)),
]
for tag, z in LGAMMA_POINTS:
    v = mp.loggamma(z)
    emit(f"kLogGamma_{tag}_re", z.real)
    emit(f"kLogGamma_{tag}_im", z.imag)
    emit(f"kLogGamma_{tag}_value_re", v.real)
    emit(f"kLogGamma_{tag}_value_im", v.imag)


def dk(omega0, delta0, offset, T):
    # Survival probability |Gamma...|^2 ratio of the Demkov-Kunike model.
    a = omega0 * T / 2
    d = offset * T / 2
    c = delta0 * T / 2
    s = mp.sqrt(mp.mpc(a * a - c * c))
    num = mp.gamma(mp.mpf(0.5) + 1j * (d + c)) * mp.gamma(mp.mpf(0.5) + 1j * (d - c))
    den = mp.gamma(mp.mpf(0.5) + s + 1j * d) * mp.gamma(mp.mpf(0.5) - s + 1j * d)
    return 1 - abs(num / den) ** 2


comment("Demkov-Kunike transition probability")
emit("kDk_s1_zero", dk(10 * MHZ, 25 * MHZ, 0, mp.mpf(0.5) * US))
emit("kDk_s1_plus15", dk(10 * MHZ, 25 * MHZ, 15 * MHZ, mp.mpf(0.5) * US))
emit("kDk_s1_minus15", dk(10 * MHZ, 25 * MHZ, -15 * MHZ, mp.mpf(0.5) * US))
# Omega0 > Delta0: imaginary square-root branch.
emit("kDk_strong", dk(10 * MHZ, 5 * MHZ, 3 * MHZ, mp.mpf(0.2) * US))
emit("kDk_weak", dk(1 * MHZ, 2 * MHZ, mp.mpf(0.4) * MHZ, mp.mpf(0.2) * US))


def ae(omega0, R, T):
    a = mp.pi * T * R / 4
    disc = 4 * omega0**2 - R**2
    w = mp.pi * T * mp.sqrt(abs(disc)) / 4
    c = (mp.cos(w) if disc >= 0 else mp.cosh(w)) / mp.cosh(a)
    return 1 - c * c


comment("Allen-Eberly transition probability")
emit("kAe_s1", ae(10 * MHZ, 50 * MHZ, mp.mpf(0.5) * US))
emit("kAe_cosh_branch", ae(1 * MHZ, 4 * MHZ, mp.mpf(0.2) * US))
emit("kAe_cos_branch", ae(10 * MHZ, 5 * MHZ, mp.mpf(0.2) * US))


def crossing_eps(x, y):
    return (1 - (1 - x * x) / mp.sqrt(((1 - x) ** 2 + y * y) * ((1 + x) ** 2 + y * y))) / 2


comment("Smallest chirp ratio R / Omega for a transition error eps at x = 2 dDelta / R")
for tag, eps, x in [("x0", 0.01, 0.0), ("x05", 0.01, 0.5), ("x03_e1", 0.1, 0.3)]:
    eps = mp.mpf(eps)
    x = mp.mpf(x)
    y = mp.findroot(lambda y: crossing_eps(x, y) - eps, 0.1)
    emit(f"kMinChirpExact_{tag}", 2 / y)


comment("Accumulated phase g int |cos(w t)| dt")
g = mp.mpf(4.34) * KHZ
ws = mp.mpf(0.5) * MHZ
t_end = 100 * US
period = mp.pi / ws
nodes = [k * period / 2 for k in range(int(t_end / (period / 2)) + 1)] + [t_end]
emit("kEta_100us", mp.quad(lambda t: g * abs(mp.cos(ws * t)), nodes))
emit("kEta_37us", mp.quad(lambda t: g * abs(mp.cos(ws * t)),
                               [n for n in nodes if n < 37 * US] + [37 * US]))

comment("Hahn echo under OU detuning noise: chi(t) = 1 at the 1/e time")
b = 50 * KHZ
tau = 20 * US


def chi_quad(t):
    # Variance of the echo phase: filter +1 on [0, t/2), -1 on [t/2, t).
    def f(s):
        return 1 if s < t / 2 else -1

    def inner(s1):
        return mp.quad(lambda s2: f(s1) * f(s2) * mp.exp(-abs(s1 - s2) / tau), [0, t / 2, t])

    return b * b * mp.quad(inner, [0, t / 2, t]) / 2


def chi_closed(t):
    return b * b * tau * tau * (t / tau - 3 + 4 * mp.exp(-t / (2 * tau)) - mp.exp(-t / tau))


emit("kHahnChiClosed_10us", chi_closed(10 * US))
emit("kHahnChiQuad_10us", chi_quad(10 * US))
emit("kHahnT2", mp.findroot(lambda t: chi_closed(t) - 1, 13 * US))
emit("kHahnT2ShortTime", (12 * tau / b**2) ** (mp.mpf(1) / 3))

comment("Ramsey 1/e time for a Gaussian detuning distribution")
sigma = mp.mpf(26.5) * MHZ / (2 * mp.sqrt(2 * mp.log(2)))
emit("kStaticSigma_26MHz", sigma)
emit("kRamseyT2star_26MHz", mp.sqrt(2) / sigma)

comment("Frequency window for b = 2pi 50 kHz, tau = 20 us, Omega0 = 2pi 10 MHz, width 2pi 26.5 MHz")
emit("kBandLower", mp.pi * (b * b / (12 * tau)) ** (mp.mpf(1) / 3))
emit("kBandUpper", mp.pi**2 * (10 * MHZ) ** 2 / (4 * mp.mpf(26.5) * MHZ))


def rap_propagator(nu0, nu1, phi):
    def rot(nu):
        return mp.matrix([[mp.cos(nu), mp.sin(nu)], [-mp.sin(nu), mp.cos(nu)]])

    phase = mp.matrix([[mp.exp(-0.5j * phi), 0], [0, mp.exp(0.5j * phi)]])
    return rot(nu1) * phase * rot(nu0).T


comment("|U_12|^2 of the ideal adiabatic propagator")
for tag, (n0, n1, ph) in {
    "a": (1.3, 0.2, 0.7),
    "b": (0.4, 1.1, 2.9),
    "c": (mp.pi / 2 - 0.05, 0.03, 1.0),
}.items():
    u = rap_propagator(mp.mpf(n0), mp.mpf(n1), mp.mpf(ph))
    emit(f"kRapProb_{tag}", abs(u[0, 1]) ** 2)

comment("Transition probability at t_c + m T_tr / 2 for k = 2 Omega0 / R")


def p_plus(k, m):
    return mp.mpf(0.5) + mp.mpf(0.5) / mp.sqrt(1 + k**2 / mp.sinh(m * k) ** 2)


emit("kPplus_m1_k0", (2 + mp.sqrt(2)) / 4)
emit("kPplus_m2_k0", mp.mpf(0.5) + 1 / mp.sqrt(5))
emit("kPplus_m1_k05", p_plus(mp.mpf(0.5), 1))
emit("kPplus_m1_k025", p_plus(mp.mpf(0.25), 1))

LICENSE_HEADER = """\
// Copyright 2026 The chirpdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
"""
print(LICENSE_HEADER)
print("// Generated by tests/oracles/generate.py; do not edit.")
print("#pragma once")
print()
print("namespace oracle {")
print("\n".join(out))
print()
print("}  // namespace oracle")
