"""Reference values for the unit tests, computed with mpmath straight from the
q-integrals. Run once; the output is committed as frozen.json."""

import json
import pathlib

import mpmath as mp

mp.mp.dps = 40
PI = mp.pi


def pos(x):
    return x if x > 0 else mp.mpf(0)


def lib_action(E):
    E = mp.mpf(E)
    qa = mp.acos(E)
    return mp.quad(lambda q: mp.sqrt(pos(E - mp.cos(q))), [qa, PI, 2 * PI - qa]) / PI


def lib_dIdE(E):
    # q = pi + x, x = x0 - u^2; E + cos x = 2 sin(x0 - u^2/2) sin(u^2/2)
    E = mp.mpf(E)
    x0 = mp.acos(-E)

    def h(u):
        return 2 * u / mp.sqrt(2 * mp.sin(x0 - u * u / 2) * mp.sin(u * u / 2))

    return 2 * mp.quad(h, [0, mp.sqrt(x0)]) / (2 * PI)


def rot_action(E, G=lambda q: mp.cos(q)):
    return mp.quad(lambda q: mp.sqrt(E - G(q)), [0, PI, 2 * PI]) / (2 * PI)


def rot_dIdE(E):
    return mp.quad(lambda q: 1 / mp.sqrt(E - mp.cos(q)), [0, PI, 2 * PI]) / (4 * PI)


def rot_d2IdE2(E):
    return -mp.quad(lambda q: (E - mp.cos(q)) ** -1.5, [0, PI, 2 * PI]) / (8 * PI)


def f(x):
    return float(x)


def main():
    out = {}
    out["pendulum_libration"] = [
        {"E": E, "I": f(lib_action(E)), "dIdE": f(lib_dIdE(E))} for E in [-0.9, -0.5, 0.0, 0.5, 0.9, 0.999]
    ]
    out["pendulum_rotation"] = [
        {"E": E, "I": f(rot_action(E)), "dIdE": f(rot_dIdE(E)), "d2IdE2": f(rot_d2IdE2(E))}
        for E in [1.001, 1.5, 3.0, 10.0, 100.0]
    ]
    out["separatrix_action"] = f(rot_action(mp.mpf(1)))
    out["elliptic"] = [{"m": m, "K": f(mp.ellipk(m)), "E": f(mp.ellipe(m))} for m in [0.0, 0.1, 0.5, 0.9, 0.999]]

    # cosine well: A0' from the q-integral, A0'' by high-precision differentiation of it
    a0 = []
    for E in [-0.99, -0.5, 0.0, 0.5, 0.99]:
        d1 = lib_dIdE(mp.mpf(E))
        d2 = mp.diff(lambda e: lib_dIdE(e), mp.mpf(E))
        a0.append({"E": E, "first": f(d1), "second": f(d2), "ratio": f(d2 / d1**3)})
    out["a0"] = a0

    d2E = []
    for E in [3.0, 1e4]:
        d1, d2 = rot_dIdE(mp.mpf(E)), rot_d2IdE2(mp.mpf(E))
        d2E.append({"E": E, "d2EdI2": f(-d2 / d1**3)})
    out["rotation_d2EdI2"] = d2E

    out["rescaled_2_plus_3cos_E6"] = f(rot_action(mp.mpf(6), lambda q: 2 + 3 * mp.cos(q)))

    # two-well cos q + 0.3 cos 2q
    c = mp.mpf(-5) / 6
    out["two_well_criticals"] = {
        "max_value": 1.3,
        "saddle_value": -0.7,
        "min_value": f(c + mp.mpf("0.3") * (2 * c * c - 1)),
        "min_theta": f(mp.acos(c)),
    }

    out["psi0_pendulum"] = f(mp.sqrt(2) / (4 * PI))

    # E(I) at the well bottom: E = -1 + 2 g I + R(2I), g = 1/sqrt 2; polynomial fit of R(u)/u^2
    g = 1 / mp.sqrt(2)
    us, rs = [], []
    for k in range(1, 9):
        I = mp.mpf(k) * mp.mpf("1e-3")
        E = mp.findroot(lambda e: lib_action(e) - I, -1 + 2 * g * I)
        u = 2 * I
        us.append(u)
        rs.append((E + 1 - 2 * g * I) / u**2)
    # least squares R(u)/u^2 = r2 + r3 u + r4 u^2 + r5 u^3
    A = mp.matrix([[u**j for j in range(4)] for u in us])
    b = mp.matrix(rs)
    sol = mp.lu_solve(A.T * A, A.T * b)
    out["pendulum_min_R"] = [f(sol[0]), f(sol[1])]

    path = pathlib.Path(__file__).with_name("frozen.json")
    path.write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
