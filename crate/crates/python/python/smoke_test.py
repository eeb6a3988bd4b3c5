"""Smoke test for the zernike_fft extension module.

Build and install first, e.g. ``maturin develop --release`` from crates/python.
"""

import cmath

import zernike_fft as zf


def gradient(rows, cols):
    return [[float((7 * i + 3 * j) % 256) for j in range(cols)] for i in range(rows)]


def main():
    # radial routes agree at moderate order
    for method in ("fft", "direct", "qrec"):
        assert abs(zf.radial(6, 2, 0.8, method) - zf.radial(6, 2, 0.8, "direct")) < 1e-9
    assert abs(zf.radial(4, 0, 1.0) - 1.0) < 1e-12

    img = gradient(24, 20)
    z = zf.compute_moments(img, 20, symmetry=True)
    assert z.n_max == 20 and z.method == "fft" and not z.neumann
    assert len(z) == len(z.coefficients()) == 121
    assert cmath.isclose(z.get(5, -3), z.get(5, 3).conjugate())
    assert z.band_range == (min(map(min, img)), max(map(max, img)))

    rec = zf.reconstruct(z, normalize=False)
    assert len(rec) == 24 and len(rec[0]) == 20
    low = zf.epsilon(img, zf.reconstruct(zf.compute_moments(img, 4), normalize=False))
    high = zf.epsilon(img, rec)
    assert 0.0 <= high < low, (high, low)

    again = zf.MomentSet.from_json(z.to_json())
    assert again.coefficients() == z.coefficients()

    qf = zf.stability_qf("fft", 30, 2000)
    assert 0.0 <= qf < 1e-3

    assert zf.signature(img) == zf.signature([row[:] for row in img])
    assert len(zf.signature(img, orders=3)) == 3

    try:
        zf.compute_moments(img, 4, method="nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown method accepted")

    print(f"zernike_fft {zf.__version__}: ok (eps order 4 -> 20: {low:.3e} -> {high:.3e}, qf(30)={qf:.2e})")


if __name__ == "__main__":
    main()
