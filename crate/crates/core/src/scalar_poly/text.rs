use num_traits::{Num, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::scalar::Scalar;
use super::var::{Family, Universe, VarId};
use crate::error::{Error, Result};

/// Parses the canonical rendering produced by `Polynomial::render`.
///
/// `b[..]`/`g[..]` name creation modes in the ghost universe and gr variables
/// in the graded universe; `names` resolves basis names such as `x` or `h'`.
pub fn parse_polynomial<C: Scalar>(text: &str, universe: Universe, names: Option<&[String]>) -> Result<Polynomial<C>> {
    let mut p = TextParser { s: text.as_bytes(), pos: 0, universe, names };
    let out = p.polynomial()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

struct TextParser<'a> {
    s: &'a [u8],
    pos: usize,
    universe: Universe,
    names: Option<&'a [String]>,
}

impl<'a> TextParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { offset: self.pos, message: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn polynomial<C: Scalar>(&mut self) -> Result<Polynomial<C>> {
        let mut out = Polynomial::zero();
        let mut sign = C::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -C::one();
        }
        loop {
            let (m, c) = self.term::<C>()?;
            out.add_term(m, c * sign.clone());
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = C::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -C::one();
                }
                _ => return Ok(out),
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> Result<(Monomial, C)> {
        let mut coef = C::one();
        let mut factors = Vec::new();
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            coef = self.rational()?;
            if self.peek() != Some(b'*') {
                return Ok((Monomial::one(), coef));
            }
            self.pos += 1;
        }
        loop {
            let v = self.variable()?;
            let mut e = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                e = self.uint()? as u32;
            }
            factors.push((v, e));
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_pairs(factors), coef))
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("integer too large"))
    }

    fn rational<C: Scalar>(&mut self) -> Result<C> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let bad = || Error::Parse { offset: start, message: format!("malformed rational '{txt}'") };
        let (n, d) = match txt.split_once('/') {
            Some((n, d)) => (n, d),
            None => (txt, "1"),
        };
        let n = C::Int::from_str_radix(n, 10).map_err(|_| bad())?;
        let d = C::Int::from_str_radix(d, 10).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(C::from_parts(n, d))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'\'') {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string())
    }

    fn basis_index(&self, name: &str) -> Option<u16> {
        if let Some(names) = self.names {
            if let Some(i) = names.iter().position(|n| n == name) {
                return Some(i as u16);
            }
        }
        name.parse::<u16>().ok().filter(|&i| i >= 1).map(|i| i - 1)
    }

    fn variable(&mut self) -> Result<VarId> {
        let start = self.pos;
        let head = self.ident()?;
        self.expect(b'[')?;
        let mut args = vec![self.ident()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            args.push(self.ident()?);
        }
        self.expect(b']')?;
        let bad = |msg: &str| Error::Parse { offset: start, message: msg.into() };
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad("expected a level"));
        let graded = self.universe == Universe::Graded;
        match (head.as_str(), args.len()) {
            ("b", 2) | ("g", 2) | ("u", 2) => {
                let level = num(&args[1])?;
                let (family, name) = match (head.as_str(), graded) {
                    ("b", false) => (Family::BetaMode, args[0].as_str()),
                    ("g", false) => (Family::GammaMode, args[0].as_str()),
                    ("u", _) => (Family::CurrentMode, args[0].as_str()),
                    ("b", true) => (Family::GrBeta, args[0].as_str()),
                    _ => (Family::GrGamma, args[0].strip_suffix('\'').ok_or_else(|| bad("dual index needs a prime"))?),
                };
                let index = self.basis_index(name).ok_or_else(|| bad("unknown basis index"))?;
                Ok(VarId::new(family, index, level, 0))
            }
            ("Q", 4) => {
                let a = num(&args[0])? as u16;
                let b = num(&args[1])? as u16;
                if !(1..=b).contains(&a) || b > 3 {
                    return Err(bad("module pair out of range"));
                }
                Ok(VarId::gr_q(a, b, num(&args[2])?, num(&args[3])?))
            }
            ("T", 2) => {
                let u = match args[0].as_str() {
                    "x" => 0,
                    "y" => 1,
                    "h" => 2,
                    other => other.parse::<usize>().map_err(|_| bad("unknown current label"))?.saturating_sub(1),
                };
                Ok(VarId::gr_t(u, num(&args[1])?))
            }
            ("X", 1) => Ok(VarId::free(num(&args[0])? as usize)),
            _ => Err(bad(&format!("unknown variable '{head}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Polynomial<Rational>;

    fn names() -> Vec<String> {
        ["x", "y", "h"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn round_trip_relations_universe() {
        let p = &(&P::var(VarId::gr_q(3, 3, 0, 1)) * &P::var(VarId::gr_t(2, 0))) - &P::var(VarId::gr_q(1, 3, 1, 0)).scale(&Rational::frac(3, 2));
        let text = p.to_string();
        assert_eq!(parse_polynomial::<Rational>(&text, Universe::Relations, None).unwrap(), p);
    }

    #[test]
    fn round_trip_graded_with_names() {
        let n = names();
        let p = &(&P::var(VarId::gr_beta(0, 0)) * &P::var(VarId::gr_gamma(2, 0))).scale(&Rational::from_i64(2))
            - &(&P::var(VarId::gr_beta(2, 0)) * &P::var(VarId::gr_gamma(1, 0)));
        let text = p.render(Some(&n));
        assert_eq!(text, "2*b[x,0]*g[h',0] - b[h,0]*g[y',0]");
        assert_eq!(parse_polynomial::<Rational>(&text, Universe::Graded, Some(&n)).unwrap(), p);
    }

    #[test]
    fn ghost_states_and_errors() {
        let p = parse_polynomial::<Rational>("b[1,0]*g[1,1]^2 - 1/2", Universe::Ghost, None).unwrap();
        assert_eq!(p.len(), 2);
        assert!(matches!(
            parse_polynomial::<Rational>("b[1,0] + 1/0", Universe::Ghost, None),
            Err(Error::Parse { offset: 9, .. })
        ));
        assert!(parse_polynomial::<Rational>("w[1,0]", Universe::Ghost, None).is_err());
    }
}
