//! Exact rational values and their text form.

use num_rational::Ratio;
use num_traits::{CheckedAdd, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

/// `p/q`, or just `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Sum of `num / den` terms with overflow detection.
pub(crate) fn checked_sum<I: IntoIterator<Item = (i128, i128)>>(terms: I) -> Option<Rational> {
    let mut acc = Rational::zero();
    for (num, den) in terms {
        if den == 0 {
            return None;
        }
        acc = acc.checked_add(&Rational::new(num, den))?;
    }
    Some(acc)
}

pub(crate) mod serde_rational {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }
}

pub(crate) mod serde_opt_rational {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(format_rational(&Rational::new(4, 2)), "2");
        assert_eq!(format_rational(&Rational::new(2, 27)), "2/27");
    }

    #[test]
    fn overflow_detected() {
        assert!(checked_sum([(1, i128::MAX), (1, i128::MAX - 1)]).is_none());
        assert_eq!(checked_sum([(1, 2), (1, 3)]), Some(Rational::new(5, 6)));
    }
}
