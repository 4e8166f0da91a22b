use super::engine::{binom, Engine};
use super::state::{monomial_weight, State};
use crate::error::Result;
use crate::scalar_poly::Scalar;

/// Identities checked by [`Engine::check_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// Non-associativity of the Wick product.
    WickAssociator,
    /// Failure of `a o_n`, `n >= 0`, to be a derivation of the Wick product.
    WickDerivation,
    /// Skew symmetry `a o_n b = sum_p (-1)^(p+1) (b o_p a) o_(n-p-1) 1`.
    SkewSymmetry,
    /// Mode commutator `[a(m), b(k)] = sum_p binom(m, p) (a o_p b)(m+k-p)`.
    ModeCommutator,
}

/// Outcome of a commutant membership test.
#[derive(Clone, Debug)]
pub struct Membership<C> {
    pub member: bool,
    /// A generator index, mode and nonzero product disproving membership.
    pub witness: Option<(usize, i64, State<C>)>,
}

fn max_weight<C: Scalar>(s: &State<C>) -> i64 {
    s.value.monomials().map(monomial_weight).max().unwrap_or(0)
}

fn factorial<C: Scalar>(n: i64) -> C {
    (1..=n).fold(C::one(), |acc, i| acc * C::from_i64(i))
}

impl<C: Scalar> Engine<C> {
    fn derivative_n(&self, a: &State<C>, n: i64) -> Result<State<C>> {
        let mut out = a.clone();
        for _ in 0..n {
            out = self.derivative(&out)?;
        }
        Ok(out)
    }

    /// Evaluates both sides of `which` and compares them exactly. `c` is
    /// ignored by the skew-symmetry check; `n` is ignored by the associator.
    pub fn check_identity(&self, which: Identity, a: &State<C>, b: &State<C>, c: &State<C>, n: i64) -> Result<bool> {
        match which {
            Identity::WickAssociator => {
                let lhs = self.wick(&self.wick(a, b)?, c)?;
                let mut rhs = self.wick(a, &self.wick(b, c)?)?;
                let top = max_weight(a).max(max_weight(b)) + max_weight(c) - 1;
                for m in 0..=top {
                    let w = C::one() / factorial::<C>(m + 1);
                    let bc = self.apply_mode(b, m, c)?;
                    if !bc.is_zero() {
                        rhs = rhs.try_add(&self.wick(&self.derivative_n(a, m + 1)?, &bc)?.scale(&w))?;
                    }
                    let ac = self.apply_mode(a, m, c)?;
                    if !ac.is_zero() {
                        rhs = rhs.try_add(&self.wick(&self.derivative_n(b, m + 1)?, &ac)?.scale(&w))?;
                    }
                }
                Ok(lhs == rhs)
            }
            Identity::WickDerivation => {
                if n < 0 {
                    return Err(crate::Error::Precondition("derivation identity needs n >= 0".into()));
                }
                let lhs = self
                    .apply_mode(a, n, &self.wick(b, c)?)?
                    .try_sub(&self.wick(&self.apply_mode(a, n, b)?, c)?)?
                    .try_sub(&self.wick(b, &self.apply_mode(a, n, c)?)?)?;
                let mut rhs = State::zero(self.algebra());
                for i in 1..=n {
                    let inner = self.apply_mode(a, n - i, b)?;
                    rhs = rhs.try_add(&self.apply_mode(&inner, i - 1, c)?.scale(&binom::<C>(n, i)))?;
                }
                Ok(lhs == rhs)
            }
            Identity::SkewSymmetry => {
                let lhs = self.apply_mode(a, n, b)?;
                let vac = self.vacuum();
                let mut rhs = State::zero(self.algebra());
                let top = max_weight(a) + max_weight(b) - 1;
                for p in n..=top {
                    let ba = self.apply_mode(b, p, a)?;
                    if ba.is_zero() {
                        continue;
                    }
                    let term = self.apply_mode(&ba, n - p - 1, &vac)?;
                    let s = if p % 2 == 0 { -C::one() } else { C::one() };
                    rhs = rhs.try_add(&term.scale(&s))?;
                }
                Ok(lhs == rhs)
            }
            Identity::ModeCommutator => {
                let top = max_weight(a) + max_weight(b) - 1;
                let products: Vec<State<C>> = (0..=top.max(-1)).map(|p| self.apply_mode(a, p, b)).collect::<Result<_>>()?;
                for m in [n, -n - 1] {
                    for k in -2..=1 {
                        let lhs = self
                            .apply_mode(a, m, &self.apply_mode(b, k, c)?)?
                            .try_sub(&self.apply_mode(b, k, &self.apply_mode(a, m, c)?)?)?;
                        let mut rhs = State::zero(self.algebra());
                        for (p, ab) in products.iter().enumerate() {
                            let p = p as i64;
                            if ab.is_zero() {
                                continue;
                            }
                            rhs = rhs.try_add(&self.apply_mode(ab, m + k - p, c)?.scale(&binom::<C>(m, p)))?;
                        }
                        if lhs != rhs {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    /// Checks `L o_3 L = c/2`, `L o_2 L = 0`, `L o_1 L = 2L`, `L o_0 L = dL`.
    pub fn verify_virasoro(&self, l: &State<C>, c: &C) -> Result<bool> {
        if l.weight()? != 2 {
            return Ok(false);
        }
        let vac = self.vacuum();
        let two = C::from_i64(2);
        Ok(self.apply_mode(l, 3, l)? == vac.scale(&(c.clone() / two.clone()))
            && self.apply_mode(l, 2, l)?.is_zero()
            && self.apply_mode(l, 1, l)? == l.scale(&two)
            && self.apply_mode(l, 0, l)? == self.derivative(l)?)
    }

    /// Checks that `a` is primary of weight `delta` for `L`.
    pub fn check_primary(&self, l: &State<C>, a: &State<C>, delta: i64) -> Result<bool> {
        if self.apply_mode(l, 1, a)? != a.scale(&C::from_i64(delta)) || self.apply_mode(l, 0, a)? != self.derivative(a)? {
            return Ok(false);
        }
        for n in 2..=max_weight(l) + max_weight(a) - 1 {
            if !self.apply_mode(l, n, a)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every nonnegative mode of every generator kills `b`.
    pub fn is_commutant_member(&self, generators: &[State<C>], b: &State<C>) -> Result<Membership<C>> {
        for (i, a) in generators.iter().enumerate() {
            for n in 0..=max_weight(a) + max_weight(b) - 1 {
                let r = self.apply_mode(a, n, b)?;
                if !r.is_zero() {
                    return Ok(Membership { member: false, witness: Some((i, n, r)) });
                }
            }
        }
        Ok(Membership { member: true, witness: None })
    }
}
