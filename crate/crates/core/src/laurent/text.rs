//! Canonical text form, e.g. `t[0,-1]*t[0,0]^-1*t[0,1] + -2*c[0,0]`.

use std::fmt;
use std::str::FromStr;

use super::{Coeff, LaurentError, LaurentPoly, Monomial, PowerProduct, Var, VarKind};

pub(super) fn render_term(m: &Monomial) -> String {
    let mut factors: Vec<String> = m
        .exps
        .iter()
        .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if factors.is_empty() {
        return m.coeff.to_string();
    }
    if m.coeff.is_minus_one() {
        factors[0] = format!("-{}", factors[0]);
    } else if !m.coeff.is_one() {
        factors.insert(0, m.coeff.to_string());
    }
    factors.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(render_term).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

fn parse_err(s: &str) -> LaurentError {
    LaurentError::Parse(s.to_string())
}

fn parse_factor(raw: &str) -> Result<(Var, i32), LaurentError> {
    let (base, exp) = match raw.split_once('^') {
        Some((b, e)) => (b, e.parse::<i32>().map_err(|_| parse_err(raw))?),
        None => (raw, 1),
    };
    let open = base.find('[').ok_or_else(|| parse_err(raw))?;
    let inner = base[open..]
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(raw))?;
    let kind = VarKind::from_name(&base[..open]).ok_or_else(|| parse_err(raw))?;
    let idx: Vec<i32> = inner
        .split(',')
        .map(|s| s.trim().parse::<i32>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_err(raw))?;
    let var = match (kind.is_single_index(), idx.as_slice()) {
        (true, [l]) => Var::single(kind, *l),
        (false, [i, j]) => Var::new(kind, *i, *j),
        _ => return Err(parse_err(raw)),
    };
    Ok((var, exp))
}

fn parse_term(raw: &str) -> Result<Monomial, LaurentError> {
    let mut coeff = Coeff::ONE;
    let mut pairs = Vec::new();
    for (ix, factor) in raw.split('*').enumerate() {
        let factor = factor.trim();
        if ix == 0 {
            if let Ok(n) = factor.parse::<Coeff>() {
                coeff = n;
                continue;
            }
            if let Some(rest) = factor.strip_prefix('-') {
                coeff = -&coeff;
                pairs.push(parse_factor(rest)?);
                continue;
            }
        }
        pairs.push(parse_factor(factor)?);
    }
    Ok(Monomial::new(coeff, PowerProduct::from_pairs(pairs)))
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(LaurentPoly::zero());
        }
        let terms = s.split(" + ").map(parse_term).collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentPoly::from_terms(terms))
    }
}
