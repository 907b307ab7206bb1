//! Thin Python binding over arkworks' BLS12-381.
//!
//! Only the operations the auditing protocols need are exposed. Scalars cross
//! the boundary as 32-byte big-endian strings and are reduced mod r here.

use ark_bls12_381::{Bls12_381, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::hashing::curve_maps::wb::WBMap;
use ark_ec::hashing::map_to_curve_hasher::MapToCurveBasedHasher;
use ark_ec::hashing::HashToCurve;
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{CurveGroup, Group, VariableBaseMSM};
use ark_ff::field_hashers::DefaultFieldHasher;
use ark_ff::{BigInteger, PrimeField};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use ark_std::{One, Zero};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use sha2::Sha256;

type Gt = PairingOutput<Bls12_381>;

fn scalar(k: &[u8]) -> Fr {
    Fr::from_be_bytes_mod_order(k)
}

fn scalars(packed: &[u8], count: usize) -> PyResult<Vec<Fr>> {
    if packed.len() != 32 * count {
        return Err(PyValueError::new_err("scalar buffer must hold 32 bytes per base"));
    }
    Ok(packed.chunks(32).map(scalar).collect())
}

fn encode<'py, T: CanonicalSerialize>(py: Python<'py>, v: &T) -> Bound<'py, PyBytes> {
    let mut buf = Vec::with_capacity(v.compressed_size());
    v.serialize_compressed(&mut buf).expect("serialization into Vec cannot fail");
    PyBytes::new(py, &buf)
}

fn decode<T: CanonicalDeserialize>(data: &[u8], what: &str, expected: usize) -> PyResult<T> {
    if data.len() != expected {
        return Err(PyValueError::new_err(format!(
            "{what} encoding must be {expected} bytes, got {}",
            data.len()
        )));
    }
    let mut reader = data;
    T::deserialize_compressed(&mut reader)
        .map_err(|e| PyValueError::new_err(format!("invalid {what} encoding: {e}")))
}

#[pyclass(frozen, from_py_object, module = "auditlab._bls12381")]
#[derive(Clone)]
struct G1(G1Projective);

#[pymethods]
impl G1 {
    #[staticmethod]
    fn generator() -> Self {
        G1(G1Projective::generator())
    }

    #[staticmethod]
    fn identity() -> Self {
        G1(G1Projective::zero())
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        let p: G1Affine = decode(data, "G1", 48)?;
        Ok(G1(p.into()))
    }

    /// Hash to G1 (random-oracle variant: two SSWU maps summed, cofactor cleared).
    #[staticmethod]
    fn hash(msg: &[u8], dst: &[u8]) -> PyResult<Self> {
        let hasher = MapToCurveBasedHasher::<
            G1Projective,
            DefaultFieldHasher<Sha256, 128>,
            WBMap<ark_bls12_381::g1::Config>,
        >::new(dst)
        .map_err(|e| PyValueError::new_err(format!("hasher setup failed: {e}")))?;
        let p = hasher
            .hash(msg)
            .map_err(|e| PyValueError::new_err(format!("hash to curve failed: {e}")))?;
        Ok(G1(p.into()))
    }

    #[staticmethod]
    fn msm(bases: Vec<G1>, packed_scalars: &[u8]) -> PyResult<Self> {
        let ks = scalars(packed_scalars, bases.len())?;
        let pts: Vec<G1Projective> = bases.into_iter().map(|b| b.0).collect();
        let affine = G1Projective::normalize_batch(&pts);
        Ok(G1(G1Projective::msm(&affine, &ks).expect("lengths checked")))
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        encode(py, &self.0.into_affine())
    }

    fn add(&self, other: &G1) -> Self {
        G1(self.0 + other.0)
    }

    fn neg(&self) -> Self {
        G1(-self.0)
    }

    fn mul(&self, k: &[u8]) -> Self {
        G1(self.0 * scalar(k))
    }

    fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    fn equals(&self, other: &G1) -> bool {
        self.0 == other.0
    }
}

#[pyclass(frozen, from_py_object, module = "auditlab._bls12381")]
#[derive(Clone)]
struct G2(G2Projective);

#[pymethods]
impl G2 {
    #[staticmethod]
    fn generator() -> Self {
        G2(G2Projective::generator())
    }

    #[staticmethod]
    fn identity() -> Self {
        G2(G2Projective::zero())
    }

    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        let p: G2Affine = decode(data, "G2", 96)?;
        Ok(G2(p.into()))
    }

    #[staticmethod]
    fn msm(bases: Vec<G2>, packed_scalars: &[u8]) -> PyResult<Self> {
        let ks = scalars(packed_scalars, bases.len())?;
        let pts: Vec<G2Projective> = bases.into_iter().map(|b| b.0).collect();
        let affine = G2Projective::normalize_batch(&pts);
        Ok(G2(G2Projective::msm(&affine, &ks).expect("lengths checked")))
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        encode(py, &self.0.into_affine())
    }

    fn add(&self, other: &G2) -> Self {
        G2(self.0 + other.0)
    }

    fn neg(&self) -> Self {
        G2(-self.0)
    }

    fn mul(&self, k: &[u8]) -> Self {
        G2(self.0 * scalar(k))
    }

    fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    fn equals(&self, other: &G2) -> bool {
        self.0 == other.0
    }
}

#[pyclass(frozen, from_py_object, module = "auditlab._bls12381")]
#[derive(Clone)]
struct GT(Gt);

#[pymethods]
impl GT {
    #[staticmethod]
    fn identity() -> Self {
        GT(Gt::zero())
    }

    /// Decoding validates the element lies in the order-r subgroup.
    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        let v: Gt = decode(data, "GT", 576)?;
        Ok(GT(v))
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        encode(py, &self.0)
    }

    // GT is written additively in arkworks; these are the multiplicative ops.
    fn mul(&self, other: &GT) -> Self {
        GT(self.0 + other.0)
    }

    fn inv(&self) -> Self {
        GT(-self.0)
    }

    fn pow(&self, k: &[u8]) -> Self {
        GT(self.0.mul_bigint(scalar(k).into_bigint()))
    }

    fn is_identity(&self) -> bool {
        self.0.0.is_one()
    }

    fn equals(&self, other: &GT) -> bool {
        self.0 == other.0
    }
}

#[pyfunction]
fn pairing(a: &G1, b: &G2) -> GT {
    GT(Bls12_381::pairing(a.0.into_affine(), b.0.into_affine()))
}

#[pyfunction]
fn multi_pairing(a: Vec<G1>, b: Vec<G2>) -> PyResult<GT> {
    if a.len() != b.len() {
        return Err(PyValueError::new_err("pairing inputs must have equal length"));
    }
    let pa: Vec<G1Affine> = G1Projective::normalize_batch(&a.iter().map(|x| x.0).collect::<Vec<_>>());
    let pb: Vec<G2Affine> = G2Projective::normalize_batch(&b.iter().map(|x| x.0).collect::<Vec<_>>());
    Ok(GT(Bls12_381::multi_pairing(pa, pb)))
}

#[pyfunction]
fn order<'py>(py: Python<'py>) -> Bound<'py, PyBytes> {
    PyBytes::new(py, &Fr::MODULUS.to_bytes_be())
}

#[pymodule]
fn _bls12381(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<G1>()?;
    m.add_class::<G2>()?;
    m.add_class::<GT>()?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(multi_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(order, m)?)?;
    Ok(())
}
