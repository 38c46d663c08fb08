//! Sine and cosine integrals for non-negative arguments.
//!
//! `Cin(x) = ∫₀ˣ (1 − cos t)/t dt` is used instead of `Ci` because it is
//! entire, so differences `Cin(a) − Cin(b)` stay accurate near zero.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 4.0;

/// `(Si(x), Cin(x))` for `x ≥ 0`.
pub fn si_cin(x: f64) -> (f64, f64) {
    debug_assert!(x >= 0.0);
    if x <= SERIES_LIMIT {
        series(x)
    } else {
        let (si, ci) = continued_fraction(x);
        (si, EULER_GAMMA + x.ln() - ci)
    }
}

fn series(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    // term_k = (-1)^k x^k / k!, odd k feed Si, even k ≥ 2 feed Cin
    let mut si = 0.0;
    let mut cin = 0.0;
    let mut term = x;
    let mut k = 1u32;
    loop {
        let si_term = term / k as f64;
        si += si_term;
        let next = -term * x / (k + 1) as f64;
        let cin_term = -next / (k + 1) as f64;
        cin += cin_term;
        term = next * x / (k + 2) as f64;
        k += 2;
        if (si_term.abs() < 1e-17 * si.abs() && cin_term.abs() < 1e-17 * cin.abs()) || k > 200 {
            break;
        }
    }
    (si, cin)
}

// Lentz evaluation of the continued fraction for E1(ix) = -Ci(x) + i(Si(x) - π/2).
fn continued_fraction(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let mut b = C64::new(1.0, x);
    let mut c = C64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..1000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).l1_norm() < 1e-16 {
            break;
        }
    }
    let h = C64::cis(-x) * h;
    (FRAC_PI_2 + h.im, -h.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath (dps = 30) reference values: (x, Si, Ci, Cin)
    #[allow(clippy::excessive_precision)]
    const REFERENCE: [(f64, f64, f64, f64); 10] = [
        (0.5, 0.493_107_418_043_066_7, -0.177_784_078_806_612_9, 0.061_852_563_148_200_45),
        (1.0, 0.946_083_070_367_183_0, 0.337_403_922_900_968_1, 0.239_811_742_000_564_7),
        (2.0, 1.605_412_976_802_694_8, 0.422_980_828_774_865_0, 0.847_382_016_686_613_2),
        (3.0, 1.848_652_527_999_468_3, 0.119_629_786_008_000_3, 1.556_198_167_561_642_2),
        (5.0, 1.549_931_244_944_674_1, -0.190_029_749_656_643_9, 2.376_683_326_992_277_1),
        (10.0, 1.658_347_594_218_874_0, -0.045_456_433_004_455_37, 2.925_257_190_900_033_9),
        (50.0, 1.551_617_072_485_935_9, -0.005_628_386_324_116_305, 4.494_867_056_653_795),
        (1000.0, 1.570_233_121_968_771_2, 0.000_826_315_511_090_682_3, 7.484_144_628_372_579),
        (1e6, 1.570_795_390_043_119_1, -3.499_944_389_227_205e-7, 14.392_726_572_860_246),
        (1e15, 1.570_796_326_794_897_1, 8.582_727_931_702_363e-16, 35.115_992_059_812_22),
    ];

    #[test]
    fn matches_reference_values() {
        for (x, si_ref, _, cin_ref) in REFERENCE {
            let (si, cin) = si_cin(x);
            assert!((si - si_ref).abs() < 2e-15 * si_ref.abs().max(1.0), "Si({x}) = {si}");
            assert!((cin - cin_ref).abs() < 4e-15 * cin_ref.abs().max(1.0), "Cin({x}) = {cin}");
        }
    }

    #[test]
    fn ci_from_continued_fraction() {
        for (x, _, ci_ref, _) in REFERENCE.iter().filter(|r| r.0 > SERIES_LIMIT) {
            let (_, ci) = continued_fraction(*x);
            assert!((ci - ci_ref).abs() < 1e-15, "Ci({x}) = {ci}");
        }
    }

    #[test]
    fn small_arguments() {
        assert_eq!(si_cin(0.0), (0.0, 0.0));
        let x = 1e-8;
        let (si, cin) = si_cin(x);
        assert!((si - x).abs() < 1e-24);
        assert!((cin - x * x / 4.0).abs() < 1e-30);
    }

    #[test]
    fn branches_agree_at_switch() {
        let (a, b) = series(SERIES_LIMIT);
        let (si, ci) = continued_fraction(SERIES_LIMIT);
        let cin = EULER_GAMMA + SERIES_LIMIT.ln() - ci;
        assert!((a - si).abs() < 1e-14);
        assert!((b - cin).abs() < 1e-14);
    }
}
