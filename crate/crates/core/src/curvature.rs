//! Symplectic curvature tensors and their Ricci/Weyl splitting.
//!
//! Tensors are stored fully lowered. The Ricci contraction raises the first slot:
//! `σ_{ij} = ω^{km} R_{mikj}`. With this convention the contraction of
//! [`sigma_tilde`]`(σ)` returns `σ` itself, so [`RICCI_NORMALIZATION`] is `1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::codec;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, OperatorMatrix};
use crate::symplectic::SymplecticSpace;

/// The factor `κ` in `ricci_contract(sigma_tilde(σ)) = κ σ`.
pub const RICCI_NORMALIZATION: i64 = 1;

/// A rank-4 covariant tensor `R_{ijkl}` on the `2l`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<T> {
    l: usize,
    data: Vec<T>,
}

/// A rank-2 covariant tensor `σ_{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciTensor<T> {
    l: usize,
    data: Vec<T>,
}

fn check_l(l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::contract("l must be at least 1"));
    }
    Ok(())
}

impl<T: Field> CurvatureTensor<T> {
    pub fn zero(l: usize) -> Self {
        let n = 2 * l;
        CurvatureTensor { l, data: vec![T::zero(); n * n * n * n] }
    }

    pub fn from_fn(l: usize, f: impl Fn(usize, usize, usize, usize) -> T) -> Self {
        let n = 2 * l;
        let mut data = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        data.push(f(i, j, k, m));
                    }
                }
            }
        }
        CurvatureTensor { l, data }
    }

    /// Entries in row-major order `(i, j, k, l)`.
    pub fn from_entries(l: usize, data: Vec<T>) -> Result<Self> {
        check_l(l)?;
        if data.len() != (2 * l).pow(4) {
            return Err(Error::contract(format!("expected {} entries, got {}", (2 * l).pow(4), data.len())));
        }
        Ok(CurvatureTensor { l, data })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        2 * self.l
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    fn idx(&self, i: usize, j: usize, k: usize, m: usize) -> usize {
        let n = self.dim();
        ((i * n + j) * n + k) * n + m
    }

    pub fn get(&self, i: usize, j: usize, k: usize, m: usize) -> &T {
        &self.data[self.idx(i, j, k, m)]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &T) -> Self {
        CurvatureTensor { l: self.l, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.l, other.l, "tensors over different spaces");
        CurvatureTensor { l: self.l, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    /// `R_{ijkl} = −R_{ijlk}`.
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (0..n).all(|m| *self.get(i, j, k, m) == -self.get(i, j, m, k).clone()))))
    }

    /// `R_{ijkl} + R_{iklj} + R_{iljk} = 0`.
    pub fn satisfies_bianchi(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    (0..n).all(|m| {
                        (self.get(i, j, k, m).clone() + self.get(i, k, m, j).clone() + self.get(i, m, j, k).clone()).is_zero()
                    })
                })
            })
        })
    }

    /// `R_{ijkl} = R_{jikl}`, which symplectic curvature tensors satisfy but
    /// validation does not require.
    pub fn is_pair_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (0..n).all(|m| self.get(i, j, k, m) == self.get(j, i, k, m)))))
    }

    /// Checks antisymmetry in the last pair and the first Bianchi identity.
    pub fn validate(&self) -> Result<()> {
        if !self.is_antisymmetric() {
            return Err(Error::InvalidInput("tensor is not antisymmetric in its last two slots".into()));
        }
        if !self.satisfies_bianchi() {
            return Err(Error::InvalidInput("tensor violates the first Bianchi identity".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        json!({ "l": self.l, "entries": codec::encode_dense(&[n, n, n, n], &self.data) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (l, entries) = tensor_header(v)?;
        let n = 2 * l;
        Ok(CurvatureTensor { l, data: codec::decode_dense(&[n, n, n, n], entries)? })
    }
}

/// Accepts `{"l", "entries"}` or the bare nested array, whose outer length is `2l`.
fn tensor_header(v: &Value) -> Result<(usize, &Value)> {
    if let Value::Array(outer) = v {
        let n = outer.len();
        if n == 0 || n % 2 == 1 {
            return Err(Error::decode(format!("tensor dimension {n} is not a positive even number")));
        }
        return Ok((n / 2, v));
    }
    let l = v
        .get("l")
        .and_then(Value::as_u64)
        .filter(|&l| (1..=16).contains(&l))
        .ok_or_else(|| Error::decode("tensor needs an integer \"l\" in 1..=16"))? as usize;
    let entries = v.get("entries").ok_or_else(|| Error::decode("tensor is missing \"entries\""))?;
    Ok((l, entries))
}

impl<T: Field> RicciTensor<T> {
    pub fn zero(l: usize) -> Self {
        RicciTensor { l, data: vec![T::zero(); 4 * l * l] }
    }

    pub fn from_fn(l: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let n = 2 * l;
        RicciTensor { l, data: (0..n * n).map(|k| f(k / n, k % n)).collect() }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        2 * self.l
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, c: &T) -> Self {
        RicciTensor { l: self.l, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        RicciTensor { l: self.l, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    /// `σ^{ij} ω_{ij}` with both indices of `σ` raised; zero for symmetric `σ`.
    pub fn symplectic_trace(&self, sp: &SymplecticSpace<T>) -> T {
        let n = self.dim();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let w = sp.omega_inv(i, a).clone() * sp.omega_inv(j, b).clone();
                        if !w.is_zero() {
                            acc = acc + w * self.get(a, b).clone() * sp.omega(i, j).clone();
                        }
                    }
                }
            }
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim();
        json!({ "l": self.l, "entries": codec::encode_dense(&[n, n], &self.data) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (l, entries) = tensor_header(v)?;
        let n = 2 * l;
        Ok(RicciTensor { l, data: codec::decode_dense(&[n, n], entries)? })
    }
}

fn check_space<T: Field>(sp: &SymplecticSpace<T>, l: usize) -> Result<()> {
    if sp.l() != l {
        return Err(Error::contract(format!("tensor has l = {l} but the space has l = {}", sp.l())));
    }
    Ok(())
}

/// `σ_{ij} = ω^{km} R_{mikj}`.
pub fn ricci_contract<T: Field>(sp: &SymplecticSpace<T>, r: &CurvatureTensor<T>) -> Result<RicciTensor<T>> {
    check_space(sp, r.l())?;
    r.validate()?;
    let n = r.dim();
    let sigma = RicciTensor::from_fn(r.l(), |i, j| {
        let mut acc = T::zero();
        for k in 0..n {
            for m in 0..n {
                let w = sp.omega_inv(k, m);
                if !w.is_zero() {
                    acc = acc + w.clone() * r.get(m, i, k, j).clone();
                }
            }
        }
        acc
    });
    if !sigma.is_symmetric() {
        return Err(Error::InvalidInput(
            "Ricci contraction is not symmetric, so the input is not a symplectic curvature tensor".into(),
        ));
    }
    Ok(sigma)
}

/// `σ̃_{ijkl} = (ω_{il}σ_{jk} − ω_{ik}σ_{jl} + ω_{jl}σ_{ik} − ω_{jk}σ_{il} + 2σ_{ij}ω_{kl}) / (2(l+1))`.
pub fn sigma_tilde<T: Field>(sp: &SymplecticSpace<T>, sigma: &RicciTensor<T>) -> Result<CurvatureTensor<T>> {
    check_space(sp, sigma.l())?;
    if !sigma.is_symmetric() {
        return Err(Error::contract("σ̃ is built from a symmetric tensor"));
    }
    let norm = T::one() / T::from_int(2 * (sp.l() as i64 + 1));
    let w = |a: usize, b: usize| sp.omega(a, b).clone();
    let s = |a: usize, b: usize| sigma.get(a, b).clone();
    Ok(CurvatureTensor::from_fn(sp.l(), |i, j, k, l| {
        let v = w(i, l) * s(j, k) - w(i, k) * s(j, l) + w(j, l) * s(i, k) - w(j, k) * s(i, l) + T::from_int(2) * s(i, j) * w(k, l);
        v * norm.clone()
    }))
}

/// `W = R − σ̃(σ/κ)` with `σ` the Ricci contraction of `R`.
pub fn weyl_part<T: Field>(sp: &SymplecticSpace<T>, r: &CurvatureTensor<T>) -> Result<CurvatureTensor<T>> {
    let sigma = ricci_contract(sp, r)?.scale(&(T::one() / T::from_int(RICCI_NORMALIZATION)));
    Ok(r.sub(&sigma_tilde(sp, &sigma)?))
}

/// Whether the Weyl part vanishes exactly.
pub fn is_ricci_type<T: Field>(sp: &SymplecticSpace<T>, r: &CurvatureTensor<T>) -> Result<bool> {
    Ok(weyl_part(sp, r)?.is_zero())
}

/// A symmetric tensor with entries drawn uniformly from `-3..=3`.
pub fn random_symmetric<T: Field>(l: usize, rng: &mut impl Rng) -> RicciTensor<T> {
    let n = 2 * l;
    let mut upper = vec![0i64; n * n];
    for i in 0..n {
        for j in i..n {
            upper[i * n + j] = rng.gen_range(-3..=3);
        }
    }
    RicciTensor::from_fn(l, |i, j| T::from_int(upper[i.min(j) * n + i.max(j)]))
}

/// `σ̃` of a pseudorandom small-integer symmetric `σ`, deterministic per seed.
pub fn random_ricci_type<T: Field>(sp: &SymplecticSpace<T>, seed: u64) -> CurvatureTensor<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = random_symmetric(sp.l(), &mut rng);
    sigma_tilde(sp, &sigma).expect("symmetric by construction")
}

/// A basis of the tensors symmetric in the first pair, antisymmetric in the last
/// pair and satisfying the first Bianchi identity; with `traceless`, also with
/// vanishing Ricci contraction.
pub fn curvature_space_basis<T: Field>(sp: &SymplecticSpace<T>, traceless: bool) -> Vec<CurvatureTensor<T>> {
    let l = sp.l();
    let n = sp.dim();
    let idx = |i: usize, j: usize, k: usize, m: usize| ((i * n + j) * n + k) * n + m;
    let mut rows: Vec<Vec<(usize, T)>> = Vec::new();
    let one = T::one;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    rows.push(vec![(idx(i, j, k, m), one()), (idx(j, i, k, m), -one())]);
                    rows.push(vec![(idx(i, j, k, m), one()), (idx(i, j, m, k), one())]);
                    rows.push(vec![(idx(i, j, k, m), one()), (idx(i, k, m, j), one()), (idx(i, m, j, k), one())]);
                }
            }
        }
    }
    if traceless {
        for i in 0..n {
            for j in 0..n {
                let row = (0..n)
                    .flat_map(|k| (0..n).map(move |m| (k, m)))
                    .filter(|&(k, m)| !sp.omega_inv(k, m).is_zero())
                    .map(|(k, m)| (idx(m, i, k, j), sp.omega_inv(k, m).clone()))
                    .collect();
                rows.push(row);
            }
        }
    }
    let mut m = OperatorMatrix::zeros(rows.len(), n.pow(4));
    for (r, row) in rows.into_iter().enumerate() {
        for (c, v) in row {
            m.add_to(r, c, v);
        }
    }
    linalg::kernel_basis(&m)
        .into_iter()
        .map(|v| CurvatureTensor { l, data: v })
        .collect()
}

/// A pseudorandom small-integer combination of [`curvature_space_basis`].
pub fn random_curvature<T: Field>(sp: &SymplecticSpace<T>, basis: &[CurvatureTensor<T>], rng: &mut impl Rng) -> CurvatureTensor<T> {
    basis
        .iter()
        .fold(CurvatureTensor::zero(sp.l()), |acc, b| acc.add(&b.scale(&T::from_int(rng.gen_range(-3..=3)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn sp(l: usize) -> SymplecticSpace<Scalar> {
        SymplecticSpace::standard(l).unwrap()
    }

    #[test]
    fn zero_tensor() {
        let s = sp(2);
        let r = CurvatureTensor::<Scalar>::zero(2);
        assert!(ricci_contract(&s, &r).unwrap().is_zero());
        assert!(weyl_part(&s, &r).unwrap().is_zero());
        assert!(is_ricci_type(&s, &r).unwrap());
        assert!(sigma_tilde(&s, &RicciTensor::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn l1_example_entry() {
        let s = sp(1);
        let sigma = RicciTensor::from_fn(1, |i, j| if i == 0 && j == 0 { Scalar::from_int(1) } else { Scalar::from_int(0) });
        let t = sigma_tilde(&s, &sigma).unwrap();
        assert_eq!(*t.get(0, 0, 0, 1), Scalar::from_int(1));
    }

    #[test]
    fn asymmetric_sigma_rejected() {
        let s = sp(1);
        let sigma = RicciTensor::from_fn(1, |i, j| Scalar::from_int((i * 2 + j) as i64));
        assert!(matches!(sigma_tilde(&s, &sigma), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn invalid_tensor_rejected() {
        let s = sp(1);
        let r = CurvatureTensor::from_fn(1, |i, j, k, m| Scalar::from_int((i + j + k + m) as i64));
        assert!(matches!(ricci_contract(&s, &r), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn random_is_deterministic_and_ricci_type() {
        let s = sp(2);
        let a = random_ricci_type(&s, 7);
        assert_eq!(a, random_ricci_type(&s, 7));
        assert!(a.validate().is_ok());
        assert!(is_ricci_type(&s, &a).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = sp(1);
        let r = random_ricci_type(&s, 3);
        assert_eq!(CurvatureTensor::<Scalar>::from_json(&r.to_json()).unwrap(), r);
        let sigma = ricci_contract(&s, &r).unwrap();
        assert_eq!(RicciTensor::<Scalar>::from_json(&sigma.to_json()).unwrap(), sigma);
        assert!(CurvatureTensor::<Scalar>::from_json(&json!({"l": 1, "entries": []})).is_err());
    }
}
