//! Bond scattering matrix, bond lengths and the evolution operator `U(k)`.

use std::fs;
use std::path::Path;

use nalgebra::{Complex, DMatrix, Matrix2};
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BondId, DirectedGraph, VertexPorts};
use crate::scalar::Real;

/// The 2x2 DFT matrix `(1/sqrt 2) [[1, 1], [1, -1]]`; rows are outgoing
/// ports, columns incoming ports.
pub fn dft_vertex_matrix<T: Real>() -> Matrix2<T> {
    let h = T::FRAC_1_SQRT_2();
    Matrix2::new(h, h, h, -h)
}

/// Bond scattering matrix assembled from DFT vertex blocks.
///
/// `S[(b', b)]` is nonzero only when `t(b) = o(b')`. The DFT block is real, so
/// the matrix is stored as a real orthogonal matrix; [`Self::to_complex`]
/// lifts it when a complex operator is needed.
#[derive(Clone, Debug)]
pub struct BondScattering<T: Real> {
    matrix: DMatrix<T>,
    graph: DirectedGraph,
    ports: Vec<VertexPorts>,
}

impl<T: Real> BondScattering<T> {
    pub fn new(graph: &DirectedGraph) -> Result<Self> {
        build_bond_scattering(graph)
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn ports(&self) -> &[VertexPorts] {
        &self.ports
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Amplitude to scatter from bond `from` into bond `to`.
    pub fn transition(&self, from: BondId, to: BondId) -> T {
        self.matrix[(to, from)]
    }

    pub fn to_complex(&self) -> DMatrix<Complex<T>> {
        self.matrix.map(|x| Complex::new(x, T::zero()))
    }

    /// Frobenius norm of `S^T S - I`.
    pub fn unitarity_defect(&self) -> T {
        let b = self.dim();
        (self.matrix.transpose() * &self.matrix - DMatrix::<T>::identity(b, b)).norm()
    }
}

pub fn build_bond_scattering<T: Real>(graph: &DirectedGraph) -> Result<BondScattering<T>> {
    let ports = graph.ports()?;
    let sigma = dft_vertex_matrix::<T>();
    let b = graph.bond_count();
    let mut matrix = DMatrix::<T>::zeros(b, b);
    for port in &ports {
        for (row, &out_bond) in port.out_bonds.iter().enumerate() {
            for (col, &in_bond) in port.in_bonds.iter().enumerate() {
                matrix[(out_bond, in_bond)] = sigma[(row, col)];
            }
        }
    }
    Ok(BondScattering { matrix, graph: graph.clone(), ports })
}

/// Positive, pairwise-distinct bond lengths (the diagonal of `L`).
#[derive(Clone, Debug, PartialEq)]
pub struct BondLengths<T: Real> {
    lengths: Vec<T>,
}

impl<T: Real> BondLengths<T> {
    pub fn new(lengths: Vec<T>) -> Result<Self> {
        if let Some(i) = lengths.iter().position(|&l| !(l > T::zero())) {
            return Err(Error::InvalidLengths(format!("length {i} is not strictly positive")));
        }
        let mut sorted = lengths.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite lengths"));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLengths("lengths are not pairwise distinct".into()));
        }
        Ok(BondLengths { lengths })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn total(&self) -> T {
        self.lengths.iter().fold(T::zero(), |acc, &l| acc + l)
    }

    pub fn to_file(&self, seed: Option<u64>) -> LengthsFile {
        LengthsFile { lengths: self.lengths.iter().map(|l| l.as_f64()).collect(), seed }
    }

    pub fn from_file(file: &LengthsFile) -> Result<Self> {
        Self::new(file.lengths.iter().map(|&l| T::lit(l)).collect())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file: LengthsFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        Self::from_file(&file)
    }
}

/// `{"lengths": [...]}`, optionally with the seed that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthsFile {
    pub lengths: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Draws one length per bond uniformly from `[low, high)`, redrawing any value
/// that collides with an earlier one.
pub fn sample_bond_lengths<T: Real>(graph: &DirectedGraph, seed: u64, low: f64, high: f64) -> Result<BondLengths<T>> {
    if !(low > 0.0 && high > low && high.is_finite()) {
        return Err(Error::DegenerateInterval { low, high });
    }
    let dist = Uniform::new(low, high);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lengths: Vec<T> = Vec::with_capacity(graph.bond_count());
    while lengths.len() < graph.bond_count() {
        let candidate = T::lit(dist.sample(&mut rng));
        if candidate < T::lit(low) || candidate >= T::lit(high) || lengths.contains(&candidate) {
            continue;
        }
        lengths.push(candidate);
    }
    BondLengths::new(lengths)
}

/// `U(k) = S diag(e^{i k L_b})`, evaluated on demand.
#[derive(Clone, Debug)]
pub struct EvolutionOperator<T: Real> {
    scattering: BondScattering<T>,
    lengths: BondLengths<T>,
}

impl<T: Real> EvolutionOperator<T> {
    pub fn new(scattering: BondScattering<T>, lengths: BondLengths<T>) -> Result<Self> {
        if scattering.dim() != lengths.len() {
            return Err(Error::DimensionMismatch { expected: scattering.dim(), found: lengths.len() });
        }
        Ok(EvolutionOperator { scattering, lengths })
    }

    pub fn scattering(&self) -> &BondScattering<T> {
        &self.scattering
    }

    pub fn lengths(&self) -> &BondLengths<T> {
        &self.lengths
    }

    pub fn at(&self, k: T) -> DMatrix<Complex<T>> {
        evolution_operator(&self.scattering, &self.lengths, k).expect("dimensions checked at construction")
    }
}

pub fn evolution_operator<T: Real>(s: &BondScattering<T>, l: &BondLengths<T>, k: T) -> Result<DMatrix<Complex<T>>> {
    let b = s.dim();
    if l.len() != b {
        return Err(Error::DimensionMismatch { expected: b, found: l.len() });
    }
    let phases: Vec<Complex<T>> = l.as_slice().iter().map(|&len| T::unit_phase(k * len)).collect();
    let sm = s.matrix();
    Ok(DMatrix::from_fn(b, b, |i, j| phases[j] * sm[(i, j)]))
}

/// Frobenius norm of `U^H U - I`.
pub fn unitarity_defect<T: Real>(u: &DMatrix<Complex<T>>) -> T {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<Complex<T>>::identity(n, n)).norm()
}
