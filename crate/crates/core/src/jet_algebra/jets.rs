//! Jets of curves, the `C^*` action, coordinate transitions and covariant jets.


use serde::{Deserialize, Serialize};

use super::faa_di_bruno::{faa_di_bruno, FaaDiBrunoTable};
use super::poly::{Poly, Series};
use crate::error::{dimension, domain, Result};
use crate::scalar::{from_u64, is_zero, Scalar};

/// A k-jet: base point `x` and `(xi_1, ..., xi_k)`, each `xi_s` an r-vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetPoint<T> {
    base: Vec<T>,
    xis: Vec<Vec<T>>,
}

impl<T: Scalar> JetPoint<T> {
    pub fn new(base: Vec<T>, xis: Vec<Vec<T>>) -> Result<Self> {
        let Some(first) = xis.first() else {
            return domain("a jet needs order k >= 1");
        };
        let r = first.len();
        if r == 0 || xis.iter().any(|x| x.len() != r) {
            return dimension("every xi_s of a jet must have the same positive length");
        }
        Ok(JetPoint { base, xis })
    }

    pub fn order(&self) -> usize {
        self.xis.len()
    }

    pub fn rank(&self) -> usize {
        self.xis[0].len()
    }

    pub fn base(&self) -> &[T] {
        &self.base
    }

    pub fn xis(&self) -> &[Vec<T>] {
        &self.xis
    }

    /// `xi_s`, 1-based.
    pub fn xi(&self, s: usize) -> &[T] {
        &self.xis[s - 1]
    }
}

/// The `C^*` action `lambda . (xi_1, ..., xi_k) = (lambda xi_1, ..., lambda^k xi_k)`,
/// i.e. reparametrizing the curve as `t -> f(lambda t)`.
pub fn scale_jet<T: Scalar>(lambda: &T, jet: &JetPoint<T>) -> Result<JetPoint<T>> {
    if is_zero(lambda) {
        return domain("lambda = 0 is not in C^*");
    }
    let mut factor = T::one();
    let xis = jet
        .xis
        .iter()
        .map(|xi| {
            factor = factor.clone() * lambda.clone();
            xi.iter().map(|c| c.clone() * factor.clone()).collect()
        })
        .collect();
    Ok(JetPoint { base: jet.base.clone(), xis })
}

/// A holomorphic map `C^n -> C^n` given by its Taylor polynomial at the
/// origin up to total degree `order`; terms above `order` are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedMap<T> {
    components: Vec<Poly<T>>,
    order: u32,
}

impl<T: Scalar> TruncatedMap<T> {
    pub fn new(components: Vec<Poly<T>>, order: u32) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return dimension("a map needs at least one component");
        }
        if components.iter().any(|c| c.nvars() != n) {
            return dimension(format!("components of a self-map of C^{} must have {} variables", n, n));
        }
        Ok(TruncatedMap { components: components.iter().map(|c| c.truncate(order)).collect(), order })
    }

    pub fn identity(n: usize, order: u32) -> Self {
        TruncatedMap { components: (0..n).map(|i| Poly::var(n, i)).collect(), order }
    }

    /// The linear map `z -> A z`.
    pub fn linear(a: &[Vec<T>], order: u32) -> Result<Self> {
        let n = a.len();
        if a.iter().any(|row| row.len() != n) {
            return dimension("linear part must be square");
        }
        let comps = a
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(Poly::zero(n), |acc, (j, c)| acc.add(&Poly::var(n, j).scale(c)))
            })
            .collect();
        Self::new(comps, order)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn components(&self) -> &[Poly<T>] {
        &self.components
    }

    /// First-order coefficients `d Psi_i / d z_j (0)`.
    pub fn linear_part(&self) -> Vec<Vec<T>> {
        let n = self.dim();
        self.components
            .iter()
            .map(|c| {
                (0..n)
                    .map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        c.coeff(&e)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn eval(&self, z: &[T]) -> Vec<T> {
        self.components.iter().map(|c| c.eval(z)).collect()
    }

    /// `self o inner`, truncated at the smaller of the two orders.
    pub fn compose(&self, inner: &TruncatedMap<T>) -> Result<Self> {
        if inner.dim() != self.dim() {
            return dimension("composed maps must have the same dimension");
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps, self.order.min(inner.order))
    }

    /// Formal inverse of a map fixing the origin, to the map's order.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        if self.components.iter().any(|c| !is_zero(&c.coeff(&vec![0; n]))) {
            return domain("inverse transition is only defined for maps fixing the origin");
        }
        let a_inv = invert_matrix(&self.linear_part())?;
        let linear = TruncatedMap::linear(&self.linear_part(), self.order)?;
        let nonlinear: Vec<Poly<T>> = self
            .components
            .iter()
            .zip(&linear.components)
            .map(|(c, l)| c.sub(l))
            .collect();
        let apply_inv = |v: &[Poly<T>]| -> Vec<Poly<T>> {
            a_inv
                .iter()
                .map(|row| row.iter().zip(v).fold(Poly::zero(n), |acc, (c, p)| acc.add(&p.scale(c))))
                .collect()
        };
        // Phi = A^{-1} (w - N(Phi)); each pass fixes one more order
        let w: Vec<Poly<T>> = (0..n).map(|i| Poly::var(n, i)).collect();
        let mut phi = apply_inv(&w);
        for _ in 1..self.order {
            let n_phi = nonlinear
                .iter()
                .map(|c| c.compose(&phi).map(|p| p.truncate(self.order)))
                .collect::<Result<Vec<_>>>()?;
            let rhs: Vec<Poly<T>> = w.iter().zip(&n_phi).map(|(a, b)| a.sub(b)).collect();
            phi = apply_inv(&rhs).iter().map(|p| p.truncate(self.order)).collect();
        }
        Self::new(phi, self.order)
    }
}

/// Exact Gauss-Jordan inverse; singular matrices are a domain error.
pub(crate) fn invert_matrix<T: Scalar>(a: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !is_zero(&m[r][col])) else {
            return domain("linear part is not invertible");
        };
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !is_zero(&m[r][col]) {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let v = m[col][c].clone() * f.clone();
                    m[r][c] = m[r][c].clone() - v;
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Jet of `Psi o f` from the jet of `f`, through the chain-rule expansion
/// of [`faa_di_bruno`]. Exact over exact scalars.
pub fn push_jet<T: Scalar>(psi: &TruncatedMap<T>, jet: &JetPoint<T>) -> Result<JetPoint<T>> {
    let n = psi.dim();
    if jet.base.len() != n || jet.rank() != n {
        return dimension(format!("jet of a curve in C^{} expected, got base {} / rank {}", n, jet.base.len(), jet.rank()));
    }
    let k = jet.order();
    if (psi.order as usize) < k {
        return domain(format!("map truncated at order {} cannot push a {}-jet", psi.order, k));
    }
    let tables: Vec<FaaDiBrunoTable> = (1..=k).map(faa_di_bruno).collect::<Result<_>>()?;
    let base = psi.eval(&jet.base);
    let xis = tables
        .iter()
        .map(|table| {
            psi.components
                .iter()
                .map(|comp| {
                    table.iter().fold(T::zero(), |acc, (key, c)| {
                        let c = biguint_to_scalar::<T>(c);
                        acc + c * multilinear(comp, &jet.base, key.iter().map(|&j| jet.xi(j)))
                    })
                })
                .collect()
        })
        .collect();
    Ok(JetPoint { base, xis })
}

/// `D^s P(x)[v_1, ..., v_s]` as iterated directional derivatives.
fn multilinear<'a, T: Scalar + 'a>(p: &Poly<T>, x: &[T], vs: impl Iterator<Item = &'a [T]>) -> T {
    let mut d = p.clone();
    for v in vs {
        d = d.directional(v);
        if d.is_zero() {
            return T::zero();
        }
    }
    d.eval(x)
}

fn biguint_to_scalar<T: Scalar>(c: &num_bigint::BigUint) -> T {
    c.to_u64_digits()
        .iter()
        .rev()
        .fold(T::zero(), |acc, &d| acc * from_u64::<T>(1 << 32) * from_u64::<T>(1 << 32) + from_u64::<T>(d))
}

/// Taylor data of a curve: `f(0)` and `f'(0), ..., f^(K)(0)` (plain
/// derivatives, not divided by factorials).
#[derive(Clone, Debug, PartialEq)]
pub struct CurveTaylor<T> {
    pub base: Vec<T>,
    pub derivatives: Vec<Vec<T>>,
}

impl<T: Scalar> CurveTaylor<T> {
    pub fn new(base: Vec<T>, derivatives: Vec<Vec<T>>) -> Result<Self> {
        if derivatives.iter().any(|d| d.len() != base.len()) {
            return dimension("each derivative must have as many components as the base point");
        }
        Ok(CurveTaylor { base, derivatives })
    }

    /// Taylor data of `t -> f(lambda t)`.
    pub fn reparametrize(&self, lambda: &T) -> Self {
        let mut factor = T::one();
        CurveTaylor {
            base: self.base.clone(),
            derivatives: self
                .derivatives
                .iter()
                .map(|d| {
                    factor = factor.clone() * lambda.clone();
                    d.iter().map(|c| c.clone() * factor.clone()).collect()
                })
                .collect(),
        }
    }

    /// Component series `f_i(t)` truncated at `order`.
    pub fn series(&self, order: usize) -> Vec<Series<T>> {
        (0..self.base.len())
            .map(|i| {
                let ds: Vec<T> = self.derivatives.iter().take(order).map(|d| d[i].clone()).collect();
                Series::from_derivatives(self.base[i].clone(), &ds).truncate(order)
            })
            .collect()
    }
}

/// Christoffel symbols `Gamma^mu_{j l}(z)` of a local holomorphic connection
/// on a rank-r subbundle `V` of `T C^n`, in the frame `e_l` projecting onto
/// `d/dz_l` (`l <= r`).
#[derive(Clone, Debug, PartialEq)]
pub struct ChristoffelField<T> {
    n: usize,
    r: usize,
    gammas: Vec<Poly<T>>,
}

impl<T: Scalar> ChristoffelField<T> {
    pub fn zero(n: usize, r: usize) -> Self {
        ChristoffelField { n, r, gammas: vec![Poly::zero(n); n * r * r] }
    }

    /// Builds the field from `gamma(mu, j, l)` (0-based indices).
    pub fn from_fn(n: usize, r: usize, mut gamma: impl FnMut(usize, usize, usize) -> Poly<T>) -> Result<Self> {
        if r == 0 || r > n {
            return dimension(format!("rank {} subbundle of T C^{}", r, n));
        }
        let mut gammas = Vec::with_capacity(n * r * r);
        for mu in 0..r {
            for j in 0..n {
                for l in 0..r {
                    let g = gamma(mu, j, l);
                    if g.nvars() != n {
                        return dimension("Christoffel coefficients are functions of the n base coordinates");
                    }
                    gammas.push(g);
                }
            }
        }
        Ok(ChristoffelField { n, r, gammas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn gamma(&self, mu: usize, j: usize, l: usize) -> &Poly<T> {
        &self.gammas[(mu * self.n + j) * self.r + l]
    }
}

/// `(nabla f(0), ..., nabla^k f(0))` for the connection `gamma`, from
/// `nabla^s f = d/dt (nabla^{s-1} f)_l e_l + Gamma^mu_{j l}(f) f'_j (nabla^{s-1} f)_l e_mu`.
pub fn covariant_jet<T: Scalar>(taylor: &CurveTaylor<T>, gamma: &ChristoffelField<T>, k: usize) -> Result<JetPoint<T>> {
    let (n, r) = (gamma.n, gamma.r);
    if k == 0 {
        return domain("jet order must be at least 1");
    }
    if taylor.base.len() != n {
        return dimension(format!("curve in C^{} expected, got {} components", n, taylor.base.len()));
    }
    if taylor.derivatives.len() < k {
        return domain(format!("{} derivatives supplied, {} needed", taylor.derivatives.len(), k));
    }
    let f = taylor.series(k);
    let df: Vec<Series<T>> = f.iter().map(Series::derivative).collect();
    let gam: Vec<Series<T>> = gamma.gammas.iter().map(|g| g.eval_series(&f)).collect();

    let mut current: Vec<Series<T>> = df[..r].to_vec();
    let mut xis = vec![current.iter().map(|s| s.coeff(0)).collect::<Vec<T>>()];
    for _ in 2..=k {
        let next: Vec<Series<T>> = (0..r)
            .map(|mu| {
                let mut acc = current[mu].derivative();
                for j in 0..n {
                    for (l, cur) in current.iter().enumerate() {
                        let g = &gam[(mu * n + j) * r + l];
                        acc = acc.add(&g.mul(&df[j]).mul(cur));
                    }
                }
                acc
            })
            .collect();
        xis.push(next.iter().map(|s| s.coeff(0)).collect());
        current = next;
    }
    JetPoint::new(taylor.base.clone(), xis)
}
