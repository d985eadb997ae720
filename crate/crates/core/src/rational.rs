//! Small helpers over `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn qi(n: i64) -> Q {
    Q::from(int(n))
}

pub fn ratio(p: i64, q: i64) -> Q {
    Q::new(int(p), int(q))
}

/// Parses `"p/q"` or `"p"`; panics on malformed input. Test and literal use only.
pub fn q(s: &str) -> Q {
    parse_q(s).unwrap_or_else(|| panic!("bad rational literal {s:?}"))
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from),
    }
}

pub fn floor(x: &Q) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Q) -> BigInt {
    x.numer().div_ceil(x.denom())
}

pub fn midpoint(a: &Q, b: &Q) -> Q {
    (a + b) / qi(2)
}

/// The rational with the smallest denominator in the open interval `(lo, hi)`;
/// `hi = None` leaves it unbounded above.
pub fn simplest_between(lo: &Q, hi: Option<&Q>) -> Q {
    assert!(hi.is_none_or(|h| lo < h), "empty interval ({lo}, {hi:?})");
    if let Some(h) = hi {
        if !h.is_positive() {
            return -simplest_between(&-h, Some(&-lo));
        }
        if lo.is_negative() {
            return Q::zero();
        }
    }
    let n = Q::from(floor(lo) + 1);
    if hi.is_none_or(|h| &n < h) {
        return n;
    }
    // no integer inside, so both ends lie in [fl, fl + 1]
    let fl = Q::from(floor(lo));
    let lo_f = lo - &fl;
    let hi_f = hi.expect("bounded") - &fl;
    let inv_lo = (!lo_f.is_zero()).then(|| lo_f.recip());
    fl + simplest_between(&hi_f.recip(), inv_lo.as_ref()).recip()
}
