use kempner_core::numeric::{significant_digits, to_scientific};
use kempner_core::{Dyadic, Enclosure, Rational, Rounding};
use proptest::prelude::*;

fn q(num: i64, den: u64) -> Rational {
    let r = Rational::from(num.unsigned_abs()) / Rational::from(den);
    if num < 0 {
        -r
    } else {
        r
    }
}

#[test]
fn digits_and_rendering() {
    assert_eq!(significant_digits(128), 41);
    assert_eq!(significant_digits(53), 18);
    let third = Enclosure::from_rational(&q(1, 3), 128);
    assert_eq!(to_scientific(third.lo(), 5, Rounding::Down), "3.3333e-1");
    assert_eq!(to_scientific(third.hi(), 5, Rounding::Up), "3.3334e-1");
    assert_eq!(to_scientific(&Dyadic::from_int(1000), 3, Rounding::Down), "1.00e3");
    assert_eq!(to_scientific(&Dyadic::from_int(0), 3, Rounding::Up), "0");
}

#[test]
fn ln2_matches_series() {
    // ln 2 = Σ 1/(j 2^j); 80 terms leave less than 2^-80.
    let mut s = Rational::ZERO;
    let mut p = Rational::ONE;
    for j in 1..=80u64 {
        p *= Rational::from(2u64);
        s += Rational::ONE / (Rational::from(j) * p.clone());
    }
    let e = Enclosure::ln2(128);
    assert!(e.lo().to_rational() < s.clone() + Rational::ONE / p.clone());
    assert!(e.hi().to_rational() >= s);
    assert!(e.width().to_f64() < 1e-36);
}

proptest! {
    #[test]
    fn rational_ops_contained(a in -1000i64..1000, b in 1u64..1000, c in -1000i64..1000, d in 1u64..1000) {
        let x = q(a, b);
        let y = q(c, d);
        let ex = Enclosure::from_rational(&x, 64);
        let ey = Enclosure::from_rational(&y, 64);
        prop_assert!((&ex + &ey).contains_rational(&(x.clone() + y.clone())));
        prop_assert!((&ex - &ey).contains_rational(&(x.clone() - y.clone())));
        prop_assert!((&ex * &ey).contains_rational(&(x.clone() * y.clone())));
        if c != 0 {
            prop_assert!(ex.div(&ey).unwrap().contains_rational(&(x.clone() / y.clone())));
        }
        prop_assert!(ex.sqr().contains_rational(&(x.clone() * x.clone())));
    }

    #[test]
    fn logs_and_roots_contain_f64(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let x = q(a as i64, b);
        let l = Enclosure::ln_rational(&x, 80).unwrap();
        let want = (a as f64 / b as f64).ln();
        prop_assert!(l.lo().to_f64() <= want + 1e-12 && l.hi().to_f64() >= want - 1e-12);
        let s = Enclosure::from_rational(&x, 80).sqrt().unwrap();
        let sq = s.sqr();
        prop_assert!(sq.contains_rational(&x));
    }

    #[test]
    fn rounding_is_outward(m in any::<i64>(), e in -200isize..200, prec in 2usize..64) {
        let x = Dyadic::new(m.into(), e);
        let lo = x.round(prec, Rounding::Down);
        let hi = x.round(prec, Rounding::Up);
        prop_assert!(lo <= x && x <= hi);
        prop_assert!(lo.bits() <= prec && hi.bits() <= prec);
    }
}
