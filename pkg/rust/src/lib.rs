//! BN254 group and pairing kernels for `tracemix.algebra`.
//!
//! Thin wrappers over arkworks. Byte encodings follow the conventions of the
//! pure-Python backend exactly (big-endian coordinates, flag bits in byte 0),
//! so transcripts do not depend on which backend produced them.

use ark_bn254::{Bn254, Fq, Fq12, Fq2, Fq6, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::short_weierstrass::SWCurveConfig;
use ark_ec::{AffineRepr, CurveGroup, PrimeGroup, VariableBaseMSM};
use ark_ff::{BigInteger, CyclotomicMultSubgroup, Field, One, PrimeField, Zero};
use num_bigint::{BigInt, BigUint, Sign};
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

const FLAG_INF: u8 = 0x80;
const FLAG_BIG: u8 = 0x40;

fn to_fr(k: &BigInt) -> Fr {
    let (sign, bytes) = k.to_bytes_le();
    let f = Fr::from_le_bytes_mod_order(&bytes);
    if sign == Sign::Minus {
        -f
    } else {
        f
    }
}

fn fq_to_be(x: &Fq) -> Vec<u8> {
    x.into_bigint().to_bytes_be()
}

fn fq_from_be(b: &[u8]) -> PyResult<Fq> {
    let v = BigUint::from_bytes_be(b);
    let modulus: BigUint = Fq::MODULUS.into();
    if v >= modulus {
        return Err(PyValueError::new_err("field element out of range"));
    }
    Ok(Fq::from(v))
}

fn fq_is_big(x: &Fq) -> bool {
    x.into_bigint() > Fq::MODULUS_MINUS_ONE_DIV_TWO
}

fn fq2_is_big(x: &Fq2) -> bool {
    if !x.c1.is_zero() {
        fq_is_big(&x.c1)
    } else {
        fq_is_big(&x.c0)
    }
}

fn hash_bytes(b: &[u8]) -> u64 {
    let mut h = DefaultHasher::new();
    b.hash(&mut h);
    h.finish()
}

fn check_pow_mod(modulo: &Option<Bound<'_, PyAny>>) -> PyResult<()> {
    match modulo {
        Some(m) if !m.is_none() => Err(PyTypeError::new_err("three-argument pow is not supported")),
        _ => Ok(()),
    }
}

// ------------------------------------------------------------------ G1

#[pyclass(frozen, skip_from_py_object, module = "tracemix.algebra._native")]
#[derive(Clone)]
pub struct G1 {
    p: G1Projective,
}

fn g1_encode(p: &G1Projective) -> Vec<u8> {
    let a = p.into_affine();
    let mut out = vec![0u8; 32];
    if a.is_zero() {
        out[0] = FLAG_INF;
        return out;
    }
    out.copy_from_slice(&fq_to_be(&a.x));
    if fq_is_big(&a.y) {
        out[0] |= FLAG_BIG;
    }
    out
}

fn g1_decode(data: &[u8]) -> PyResult<G1Projective> {
    if data.len() != 32 {
        return Err(PyValueError::new_err("G1 encoding must be 32 bytes"));
    }
    let flags = data[0] & 0xC0;
    let mut body = data.to_vec();
    body[0] &= 0x3F;
    if flags & FLAG_INF != 0 {
        if flags != FLAG_INF || body.iter().any(|&b| b != 0) {
            return Err(PyValueError::new_err("malformed G1 infinity"));
        }
        return Ok(G1Projective::zero());
    }
    let x = fq_from_be(&body)?;
    let rhs = x * x * x + ark_bn254::g1::Config::COEFF_B;
    let mut y = rhs.sqrt().ok_or_else(|| PyValueError::new_err("not a G1 point"))?;
    if fq_is_big(&y) != (flags & FLAG_BIG != 0) {
        y = -y;
    }
    Ok(G1Affine::new_unchecked(x, y).into_group())
}

#[pymethods]
impl G1 {
    #[staticmethod]
    fn identity() -> Self {
        G1 { p: G1Projective::zero() }
    }

    #[staticmethod]
    fn generator() -> Self {
        G1 { p: G1Projective::generator() }
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(G1 { p: g1_decode(data)? })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &g1_encode(&self.p))
    }

    fn __mul__(&self, other: PyRef<'_, G1>) -> Self {
        G1 { p: self.p + other.p }
    }

    fn __truediv__(&self, other: PyRef<'_, G1>) -> Self {
        G1 { p: self.p - other.p }
    }

    fn __pow__(&self, k: BigInt, modulo: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        check_pow_mod(&modulo)?;
        Ok(G1 { p: self.p * to_fr(&k) })
    }

    fn inverse(&self) -> Self {
        G1 { p: -self.p }
    }

    fn is_identity(&self) -> bool {
        self.p.is_zero()
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<G1>() {
            Ok(o) => self.p == o.get().p,
            Err(_) => false,
        }
    }

    fn __hash__(&self) -> u64 {
        hash_bytes(&g1_encode(&self.p))
    }

    fn __repr__(&self) -> String {
        let e = g1_encode(&self.p);
        format!("G1({}...)", hex8(&e))
    }
}

// ------------------------------------------------------------------ G2

#[pyclass(frozen, skip_from_py_object, module = "tracemix.algebra._native")]
#[derive(Clone)]
pub struct G2 {
    p: G2Projective,
}

fn g2_encode(p: &G2Projective) -> Vec<u8> {
    let a = p.into_affine();
    let mut out = vec![0u8; 64];
    if a.is_zero() {
        out[0] = FLAG_INF;
        return out;
    }
    out[..32].copy_from_slice(&fq_to_be(&a.x.c1));
    out[32..].copy_from_slice(&fq_to_be(&a.x.c0));
    if fq2_is_big(&a.y) {
        out[0] |= FLAG_BIG;
    }
    out
}

fn g2_decode(data: &[u8]) -> PyResult<G2Projective> {
    if data.len() != 64 {
        return Err(PyValueError::new_err("G2 encoding must be 64 bytes"));
    }
    let flags = data[0] & 0xC0;
    let mut body = data.to_vec();
    body[0] &= 0x3F;
    if flags & FLAG_INF != 0 {
        if flags != FLAG_INF || body.iter().any(|&b| b != 0) {
            return Err(PyValueError::new_err("malformed G2 infinity"));
        }
        return Ok(G2Projective::zero());
    }
    let x1 = fq_from_be(&body[..32])?;
    let x0 = fq_from_be(&body[32..])?;
    let x = Fq2::new(x0, x1);
    let rhs = x * x * x + ark_bn254::g2::Config::COEFF_B;
    let mut y = rhs.sqrt().ok_or_else(|| PyValueError::new_err("not a G2 point"))?;
    if fq2_is_big(&y) != (flags & FLAG_BIG != 0) {
        y = -y;
    }
    let a = G2Affine::new_unchecked(x, y);
    if !a.is_in_correct_subgroup_assuming_on_curve() {
        return Err(PyValueError::new_err("G2 point outside the prime-order subgroup"));
    }
    Ok(a.into_group())
}

#[pymethods]
impl G2 {
    #[staticmethod]
    fn identity() -> Self {
        G2 { p: G2Projective::zero() }
    }

    #[staticmethod]
    fn generator() -> Self {
        G2 { p: G2Projective::generator() }
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(G2 { p: g2_decode(data)? })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &g2_encode(&self.p))
    }

    fn __mul__(&self, other: PyRef<'_, G2>) -> Self {
        G2 { p: self.p + other.p }
    }

    fn __truediv__(&self, other: PyRef<'_, G2>) -> Self {
        G2 { p: self.p - other.p }
    }

    fn __pow__(&self, k: BigInt, modulo: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        check_pow_mod(&modulo)?;
        Ok(G2 { p: self.p * to_fr(&k) })
    }

    fn inverse(&self) -> Self {
        G2 { p: -self.p }
    }

    fn is_identity(&self) -> bool {
        self.p.is_zero()
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<G2>() {
            Ok(o) => self.p == o.get().p,
            Err(_) => false,
        }
    }

    fn __hash__(&self) -> u64 {
        hash_bytes(&g2_encode(&self.p))
    }

    fn __repr__(&self) -> String {
        let e = g2_encode(&self.p);
        format!("G2({}...)", hex8(&e))
    }
}

// ------------------------------------------------------------------ GT

#[pyclass(frozen, skip_from_py_object, module = "tracemix.algebra._native")]
#[derive(Clone)]
pub struct GT {
    f: Fq12,
}

fn gt_encode(f: &Fq12) -> Vec<u8> {
    let mut out = Vec::with_capacity(384);
    for half in [&f.c0, &f.c1] {
        for e in [&half.c0, &half.c1, &half.c2] {
            out.extend_from_slice(&fq_to_be(&e.c0));
            out.extend_from_slice(&fq_to_be(&e.c1));
        }
    }
    out
}

fn gt_decode(data: &[u8]) -> PyResult<Fq12> {
    if data.len() != 384 {
        return Err(PyValueError::new_err("GT encoding must be 384 bytes"));
    }
    let mut v = Vec::with_capacity(12);
    for i in 0..12 {
        v.push(fq_from_be(&data[32 * i..32 * i + 32])?);
    }
    let f2 = |i: usize| Fq2::new(v[2 * i], v[2 * i + 1]);
    let f = Fq12::new(Fq6::new(f2(0), f2(1), f2(2)), Fq6::new(f2(3), f2(4), f2(5)));
    if f.pow(Fr::MODULUS) != Fq12::one() {
        return Err(PyValueError::new_err("not an element of GT"));
    }
    Ok(f)
}

fn gt_pow(f: &Fq12, k: &Fr) -> Fq12 {
    // GT is written additively by arkworks; go through PairingOutput for the
    // cyclotomic-aware scalar multiplication
    (PairingOutput::<Bn254>(*f) * k).0
}

#[pymethods]
impl GT {
    #[staticmethod]
    fn identity() -> Self {
        GT { f: Fq12::one() }
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(GT { f: gt_decode(data)? })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &gt_encode(&self.f))
    }

    fn __mul__(&self, other: PyRef<'_, GT>) -> Self {
        GT { f: self.f * other.f }
    }

    fn __truediv__(&self, other: PyRef<'_, GT>) -> Self {
        let mut inv = other.f;
        inv.cyclotomic_inverse_in_place();
        GT { f: self.f * inv }
    }

    fn __pow__(&self, k: BigInt, modulo: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        check_pow_mod(&modulo)?;
        Ok(GT { f: gt_pow(&self.f, &to_fr(&k)) })
    }

    fn inverse(&self) -> Self {
        let mut inv = self.f;
        inv.cyclotomic_inverse_in_place();
        GT { f: inv }
    }

    fn is_identity(&self) -> bool {
        self.f.is_one()
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        match other.cast::<GT>() {
            Ok(o) => self.f == o.get().f,
            Err(_) => false,
        }
    }

    fn __hash__(&self) -> u64 {
        hash_bytes(&gt_encode(&self.f))
    }

    fn __repr__(&self) -> String {
        let e = gt_encode(&self.f);
        format!("GT({}...)", hex8(&e))
    }
}

fn hex8(b: &[u8]) -> String {
    b[..8].iter().map(|x| format!("{:02x}", x)).collect()
}

// ------------------------------------------------------------------ kernels

#[pyfunction]
fn pairing(a: PyRef<'_, G1>, b: PyRef<'_, G2>) -> GT {
    GT { f: Bn254::pairing(a.p, b.p).0 }
}

#[pyfunction]
fn multi_pairing(pairs: Vec<(PyRef<'_, G1>, PyRef<'_, G2>)>) -> GT {
    let g1s: Vec<G1Affine> = pairs.iter().map(|(a, _)| a.p.into_affine()).collect();
    let g2s: Vec<G2Affine> = pairs.iter().map(|(_, b)| b.p.into_affine()).collect();
    GT { f: Bn254::multi_pairing(g1s, g2s).0 }
}

#[pyfunction]
fn g1_multi_exp(points: Vec<PyRef<'_, G1>>, scalars: Vec<BigInt>) -> PyResult<G1> {
    if points.len() != scalars.len() {
        return Err(PyValueError::new_err("length mismatch"));
    }
    let proj: Vec<G1Projective> = points.iter().map(|p| p.p).collect();
    let bases = G1Projective::normalize_batch(&proj);
    let ks: Vec<Fr> = scalars.iter().map(to_fr).collect();
    Ok(G1 { p: G1Projective::msm(&bases, &ks).map_err(|_| PyValueError::new_err("msm failed"))? })
}

#[pyfunction]
fn g2_multi_exp(points: Vec<PyRef<'_, G2>>, scalars: Vec<BigInt>) -> PyResult<G2> {
    if points.len() != scalars.len() {
        return Err(PyValueError::new_err("length mismatch"));
    }
    let proj: Vec<G2Projective> = points.iter().map(|p| p.p).collect();
    let bases = G2Projective::normalize_batch(&proj);
    let ks: Vec<Fr> = scalars.iter().map(to_fr).collect();
    Ok(G2 { p: G2Projective::msm(&bases, &ks).map_err(|_| PyValueError::new_err("msm failed"))? })
}

#[pyfunction]
fn gt_multi_exp(elems: Vec<PyRef<'_, GT>>, scalars: Vec<BigInt>) -> PyResult<GT> {
    if elems.len() != scalars.len() {
        return Err(PyValueError::new_err("length mismatch"));
    }
    let mut acc = Fq12::one();
    for (e, k) in elems.iter().zip(scalars.iter()) {
        acc *= gt_pow(&e.f, &to_fr(k));
    }
    Ok(GT { f: acc })
}

#[pymodule]
fn _native(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<G1>()?;
    m.add_class::<G2>()?;
    m.add_class::<GT>()?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(multi_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(g1_multi_exp, m)?)?;
    m.add_function(wrap_pyfunction!(g2_multi_exp, m)?)?;
    m.add_function(wrap_pyfunction!(gt_multi_exp, m)?)?;
    m.add("BACKEND", "native")?;
    Ok(())
}
