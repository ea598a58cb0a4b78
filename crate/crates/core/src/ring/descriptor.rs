use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::RingError;

/// Coefficient ring of a polynomial or Laurent ring. Towers are not allowed,
/// so coefficients are always `Z` or `Z/m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Integers,
    Residue(BigInt),
}

impl CoeffRing {
    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            CoeffRing::Integers => None,
            CoeffRing::Residue(m) => Some(m),
        }
    }

    fn render(&self) -> String {
        match self {
            CoeffRing::Integers => "Z".to_string(),
            CoeffRing::Residue(m) => format!("Z/{m}"),
        }
    }
}

/// The supported commutative rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Residue { modulus: BigInt },
    Polynomial { vars: Vec<String>, coeff: CoeffRing },
    Laurent { var: String, coeff: CoeffRing },
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor::Integers
    }

    pub fn residue(modulus: impl Into<BigInt>) -> Result<Self, RingError> {
        let modulus = modulus.into();
        check_modulus(&modulus)?;
        Ok(RingDescriptor::Residue { modulus })
    }

    pub fn polynomial<S: AsRef<str>>(vars: &[S], coeff: CoeffRing) -> Result<Self, RingError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        if vars.is_empty() {
            return Err(RingError::InvalidDescriptor(
                "polynomial ring needs at least one variable".into(),
            ));
        }
        for (i, v) in vars.iter().enumerate() {
            check_var_name(v)?;
            if vars[..i].contains(v) {
                return Err(RingError::InvalidDescriptor(format!("duplicate variable `{v}`")));
            }
        }
        if let CoeffRing::Residue(m) = &coeff {
            check_modulus(m)?;
        }
        Ok(RingDescriptor::Polynomial { vars, coeff })
    }

    pub fn laurent(var: &str, coeff: CoeffRing) -> Result<Self, RingError> {
        check_var_name(var)?;
        if let CoeffRing::Residue(m) = &coeff {
            check_modulus(m)?;
        }
        Ok(RingDescriptor::Laurent { var: var.to_string(), coeff })
    }

    /// Variables in declared order; empty for `Z` and `Z/m`.
    pub fn variables(&self) -> Vec<&str> {
        match self {
            RingDescriptor::Polynomial { vars, .. } => vars.iter().map(String::as_str).collect(),
            RingDescriptor::Laurent { var, .. } => vec![var.as_str()],
            _ => Vec::new(),
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables().iter().position(|v| *v == name)
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, RingDescriptor::Laurent { .. })
    }

    pub fn has_monomials(&self) -> bool {
        matches!(self, RingDescriptor::Polynomial { .. } | RingDescriptor::Laurent { .. })
    }

    /// The coefficient ring, viewing `Z` and `Z/m` as their own coefficients.
    pub fn coeff_ring(&self) -> CoeffRing {
        match self {
            RingDescriptor::Integers => CoeffRing::Integers,
            RingDescriptor::Residue { modulus } => CoeffRing::Residue(modulus.clone()),
            RingDescriptor::Polynomial { coeff, .. } | RingDescriptor::Laurent { coeff, .. } => {
                coeff.clone()
            }
        }
    }

    fn modulus(&self) -> Option<&BigInt> {
        match self {
            RingDescriptor::Integers => None,
            RingDescriptor::Residue { modulus } => Some(modulus),
            RingDescriptor::Polynomial { coeff, .. } | RingDescriptor::Laurent { coeff, .. } => coeff.modulus(),
        }
    }

    /// Reduces an integer coefficient into normal form.
    pub(crate) fn reduce(&self, c: BigInt) -> BigInt {
        match self.modulus() {
            None => c,
            Some(m) => modulo(c, m),
        }
    }

    /// Characteristic: `None` for characteristic zero.
    pub fn characteristic(&self) -> Option<BigInt> {
        self.modulus().cloned()
    }

    /// True when the coefficient ring is `Z/p` for a prime `p`.
    pub fn has_prime_field_coefficients(&self) -> bool {
        self.modulus().map(is_probable_prime).unwrap_or(false)
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::Residue { modulus } => write!(f, "Z/{modulus}"),
            RingDescriptor::Polynomial { vars, coeff } => {
                write!(f, "{}[{}]", coeff.render(), vars.join(","))
            }
            RingDescriptor::Laurent { var, coeff } => write!(f, "{}[{var}^±]", coeff.render()),
        }
    }
}

pub(crate) fn modulo(c: BigInt, m: &BigInt) -> BigInt {
    let r = c % m;
    if r.is_negative() {
        r + m
    } else {
        r
    }
}

fn check_modulus(m: &BigInt) -> Result<(), RingError> {
    if *m < BigInt::from(2) {
        return Err(RingError::InvalidDescriptor(format!("modulus {m} must be at least 2")));
    }
    Ok(())
}

fn check_var_name(v: &str) -> Result<(), RingError> {
    let mut chars = v.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(RingError::InvalidDescriptor(format!("invalid variable name `{v}`")))
    }
}

// Trial division; moduli in this library are small.
fn is_probable_prime(m: &BigInt) -> bool {
    if *m < BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *m {
        if (m % &d).is_zero() {
            return false;
        }
        d += BigInt::one();
    }
    true
}
