use crate::cartan::CartanConnection;
use crate::expr::{Compiled, ScalarExpr};
use crate::{Error, Real};

/// Coframe, inverse frame and connection coefficients compiled for fast
/// evaluation at coordinate points.
#[derive(Clone, Debug)]
pub struct NumericConnection<T> {
    n: usize,
    /// `E[i][μ]`, coefficient of `dx^μ` in `ω^i`.
    coframe: Vec<Vec<Compiled<T>>>,
    /// `E⁻¹[μ][i]`, coordinate components of `e_i`.
    inverse: Vec<Vec<Compiled<T>>>,
    /// `[i][j][μ]`, coefficient of `dx^μ` in `ω^i_j`.
    omega: Vec<Vec<Vec<Compiled<T>>>>,
}

impl<T: Real> NumericConnection<T> {
    pub fn new(conn: &CartanConnection) -> Result<Self, Error> {
        let frame = conn.frame();
        let n = frame.dim();
        let names: Vec<&str> = frame.chart().names().iter().map(String::as_str).collect();
        let params: Vec<(&str, T)> = frame
            .params()
            .iter()
            .map(|(k, v)| (k.as_str(), T::from_f64(*v).expect("finite parameter")))
            .collect();
        let compile = |e: &ScalarExpr| Compiled::new(e, &names, &params).map_err(Error::from);
        let grid = |m: &[Vec<ScalarExpr>]| -> Result<Vec<Vec<Compiled<T>>>, Error> {
            m.iter()
                .map(|row| row.iter().map(compile).collect())
                .collect()
        };
        let omega = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let f = conn.omega(i, j);
                        (0..n).map(|mu| compile(&f.coeff(&[mu]))).collect()
                    })
                    .collect()
            })
            .collect::<Result<_, Error>>()?;
        Ok(NumericConnection {
            n,
            coframe: grid(frame.matrix())?,
            inverse: grid(frame.inverse())?,
            omega,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn contract(row: &[Compiled<T>], x: &[T], v: &[T]) -> Result<T, Error> {
        let mut s = T::zero();
        for (c, vm) in row.iter().zip(v) {
            if !c.is_zero_constant() && *vm != T::zero() {
                s = s + c.eval(x)? * *vm;
            }
        }
        Ok(s)
    }

    /// `θ^i(v)` for a coordinate vector `v` at `x`.
    pub fn coframe_on(&self, x: &[T], v: &[T]) -> Result<Vec<T>, Error> {
        self.coframe
            .iter()
            .map(|row| Self::contract(row, x, v))
            .collect()
    }

    /// `E⁻¹[μ][i]` at `x`.
    pub fn inverse_at(&self, x: &[T]) -> Result<Vec<Vec<T>>, Error> {
        self.inverse
            .iter()
            .map(|row| row.iter().map(|c| c.eval(x).map_err(Error::from)).collect())
            .collect()
    }

    /// `A^i_j = ω^i_j(v)` at `x`.
    pub fn omega_on(&self, x: &[T], v: &[T]) -> Result<Vec<Vec<T>>, Error> {
        self.omega
            .iter()
            .map(|row| row.iter().map(|f| Self::contract(f, x, v)).collect())
            .collect()
    }
}
