//! Parameter tuples `(q, t; a, b; c, d)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::scalar::{format_scalar, int, parse_scalar, powi, Scalar};
use crate::{Error, Result};

/// A non-real complex pair `c = d̄` stored through its real symmetric functions
/// `s1 = c + d` and `s2 = c·d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjugatePair {
    s1: Scalar,
    s2: Scalar,
}

impl ConjugatePair {
    pub fn new(s1: Scalar, s2: Scalar) -> Result<Self> {
        if !s2.is_positive() {
            return Err(Error::Constraint(format!(
                "c·d must be positive, got {}",
                format_scalar(&s2)
            )));
        }
        if &s1 * &s1 >= int(4) * &s2 {
            return Err(Error::Constraint(format!(
                "(c+d)² < 4cd is required for a non-real conjugate pair, got c+d = {}, cd = {}",
                format_scalar(&s1),
                format_scalar(&s2)
            )));
        }
        Ok(ConjugatePair { s1, s2 })
    }

    /// The pair `re ± i·im`.
    pub fn from_parts(re: &Scalar, im: &Scalar) -> Result<Self> {
        if im.is_zero() {
            return Err(Error::Constraint(
                "the complex parameter must be non-real".into(),
            ));
        }
        Self::new(int(2) * re, re * re + im * im)
    }

    /// Parses `"re+imi"` / `"re-imi"` with rational parts, e.g. `"1/2+3/4i"`.
    pub fn parse(text: &str) -> Result<Self> {
        let (re, im) = parse_complex(text)?;
        Self::from_parts(&re, &im)
    }

    pub fn s1(&self) -> &Scalar {
        &self.s1
    }

    pub fn s2(&self) -> &Scalar {
        &self.s2
    }

    /// The pair `(λc, λd)` for a real factor `λ`.
    pub fn scaled(&self, factor: &Scalar) -> ConjugatePair {
        ConjugatePair {
            s1: &self.s1 * factor,
            s2: &self.s2 * factor * factor,
        }
    }

    /// Floating-point real and (positive) imaginary part.
    pub fn to_complex_parts(&self) -> (f64, f64) {
        let s1 = super::to_f64(&self.s1);
        let s2 = super::to_f64(&self.s2);
        (s1 / 2.0, (s2 - s1 * s1 / 4.0).sqrt())
    }
}

/// Splits `"re±imi"` into rational real and imaginary parts.
pub fn parse_complex(text: &str) -> Result<(Scalar, Scalar)> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace(['·', '*'], "");
    let bad = || {
        Error::Parse(format!(
            "expected a complex number like 1/2+3/4i, got {text:?}"
        ))
    };
    let body = s.strip_suffix('i').ok_or_else(bad)?;
    // the sign separating the parts is the last +/- that is not leading
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(_, c)| c == '+' || c == '-')
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1".to_string(),
        "-" => "-1".to_string(),
        other => other.trim_start_matches('+').to_string(),
    };
    Ok((parse_scalar(re)?, parse_scalar(&im)?))
}

/// The 6-tuple `(q, t; a, b; c, d)` with `0<q<1`, `0<t<1`, `b<0<a`, `c = d̄ ∉ ℝ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub q: Scalar,
    pub t: Scalar,
    pub a: Scalar,
    pub b: Scalar,
    pub cd: ConjugatePair,
}

impl Params {
    pub fn new(q: Scalar, t: Scalar, a: Scalar, b: Scalar, cd: ConjugatePair) -> Result<Self> {
        let unit = |x: &Scalar, name: &str| -> Result<()> {
            if x.is_positive() && x < &Scalar::one() {
                Ok(())
            } else {
                Err(Error::Constraint(format!(
                    "0 < {name} < 1 is required, got {name} = {}",
                    format_scalar(x)
                )))
            }
        };
        unit(&q, "q")?;
        unit(&t, "t")?;
        if !a.is_positive() {
            return Err(Error::Constraint(format!(
                "a > 0 is required, got a = {}",
                format_scalar(&a)
            )));
        }
        if !b.is_negative() {
            return Err(Error::Constraint(format!(
                "b < 0 is required, got b = {}",
                format_scalar(&b)
            )));
        }
        Ok(Params { q, t, a, b, cd })
    }

    /// Level-`n` parameters `(α, β; γ t^{1-n}, δ t^{1-n})` built from a base tuple.
    pub fn shift_level(&self, n: usize) -> Params {
        assert!(n >= 1, "level must be at least 1");
        let factor = powi(&self.t, 1 - n as i64);
        Params {
            cd: self.cd.scaled(&factor),
            ..self.clone()
        }
    }

    pub fn s1(&self) -> &Scalar {
        self.cd.s1()
    }

    pub fn s2(&self) -> &Scalar {
        self.cd.s2()
    }

    pub fn ab(&self) -> Scalar {
        &self.a * &self.b
    }

    /// Largest coordinate magnitude on the lattice, `max(a⁻¹, |b|⁻¹)·q`.
    pub fn max_coordinate(&self) -> Scalar {
        let pa = self.a.recip();
        let pb = self.b.abs().recip();
        (if pa > pb { pa } else { pb }) * &self.q
    }

    pub fn summary(&self) -> ParamsSummary {
        let (re, im) = self.cd.to_complex_parts();
        ParamsSummary {
            q: format_scalar(&self.q),
            t: format_scalar(&self.t),
            a: format_scalar(&self.a),
            b: format_scalar(&self.b),
            c_plus_d: format_scalar(self.s1()),
            c_times_d: format_scalar(self.s2()),
            c_float: format!("{re:.12e}{im:+.12e}i"),
        }
    }
}

/// Text rendering of a parameter tuple for reports.
#[derive(Clone, Debug, Serialize)]
pub struct ParamsSummary {
    pub q: String,
    pub t: String,
    pub a: String,
    pub b: String,
    pub c_plus_d: String,
    pub c_times_d: String,
    pub c_float: String,
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} t={} a={} b={} c+d={} cd={}",
            format_scalar(&self.q),
            format_scalar(&self.t),
            format_scalar(&self.a),
            format_scalar(&self.b),
            format_scalar(self.s1()),
            format_scalar(self.s2())
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalgebra::rat;

    fn base(s1: Scalar, s2: Scalar) -> Params {
        Params::new(
            rat(1, 4),
            rat(1, 2),
            int(2),
            int(-3),
            ConjugatePair::new(s1, s2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn shift_level_examples() {
        let p = base(int(1), int(1));
        assert_eq!(p.shift_level(1), p);
        let s = p.shift_level(2);
        assert_eq!((s.s1(), s.s2()), (&int(2), &int(4)));
        assert!(s.s1() * s.s1() < int(4) * s.s2());
        assert_eq!((&s.q, &s.t, &s.a, &s.b), (&p.q, &p.t, &p.a, &p.b));
    }

    #[test]
    fn constraint_violations_are_named() {
        let cd = ConjugatePair::new(int(0), int(1)).unwrap();
        let err = Params::new(int(1), rat(1, 2), int(1), int(-1), cd.clone()).unwrap_err();
        assert!(err.to_string().contains("q"));
        let err = Params::new(rat(1, 2), rat(1, 2), int(1), int(1), cd).unwrap_err();
        assert!(err.to_string().contains("b < 0"));
        assert!(ConjugatePair::new(int(2), int(1)).is_err());
        assert!(ConjugatePair::new(int(0), int(-1)).is_err());
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1/2+3/4i").unwrap(), (rat(1, 2), rat(3, 4)));
        assert_eq!(parse_complex("-1-2i").unwrap(), (int(-1), int(-2)));
        assert_eq!(parse_complex("2i").unwrap(), (int(0), int(2)));
        assert_eq!(parse_complex("1/3-i").unwrap(), (rat(1, 3), int(-1)));
        let pair = ConjugatePair::parse("1+1i").unwrap();
        assert_eq!((pair.s1(), pair.s2()), (&int(2), &int(2)));
        assert!(ConjugatePair::parse("1+0i").is_err());
    }
}
