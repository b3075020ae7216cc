//! Subspaces of tensor powers of `E = K^n`: the spaces `E_q(L, E)`, the
//! bridge between quadratic relations and subspaces of `E ⊗ E`, the rank
//! method for Hilbert series of random quadratic algebras, block direct sums
//! and the named witness constructions.
//!
//! Composite indices are row-major: `e_{i1} ⊗ ... ⊗ e_{iq}` has coordinate
//! `((i1 * n + i2) * n + ...) * n + iq` with 0-based `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use thiserror::Error;

use crate::coeffs::{seeded_rng, Field, FieldError, FieldSpec, PrimeField, Rationals};
use crate::freealg::{FreeAlgError, Presentation};
use crate::linalg::{
    read_subspace_header, write_subspace_sparse, parse_subspace, Echelon, LinalgError, RowSpace,
};
use crate::series::TruncatedSeries;

/// Largest ambient dimension any single computation may touch by default.
pub const DEFAULT_MAX_AMBIENT: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("ambient dimension {ambient} = {n}^{q} exceeds the cap {cap}")]
    SizeGuard {
        n: usize,
        q: usize,
        ambient: u128,
        cap: usize,
    },
    #[error("block size {size} out of range 1..={n}")]
    BlockSize { size: usize, n: usize },
    #[error("block layout is empty")]
    EmptyLayout,
    #[error("alp4 hypothesis fails: {0}")]
    Alp4Hypothesis(String),
    #[error("inflated witness has E_{q} of dimension {dim}, expected 0")]
    VerificationFailed { q: usize, dim: usize },
    #[error("subspace ambient {ambient} is not n^2 for n = {n}")]
    NotSquare { ambient: usize, n: usize },
    #[error("relation {index} has degree {degree}; only quadratic relations embed in E ⊗ E")]
    NotQuadratic { index: usize, degree: usize },
    #[error("relation vector has length {len}, expected {expected}")]
    BadRelation { len: usize, expected: usize },
    #[error("unknown construction {0:?}")]
    UnknownConstruction(String),
    #[error("construction {name} needs {requirement}")]
    BadParameter { name: String, requirement: String },
    #[error("witness file: {0}")]
    Format(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Presentation(#[from] FreeAlgError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `n^q`, refusing anything above `cap`.
pub fn guarded_power(n: usize, q: usize, cap: usize) -> Result<usize, TensorError> {
    let ambient = (n as u128).checked_pow(q as u32).unwrap_or(u128::MAX);
    if ambient > cap as u128 {
        return Err(TensorError::SizeGuard { n, q, ambient, cap });
    }
    Ok(ambient as usize)
}

fn pow(n: usize, q: usize) -> usize {
    n.pow(q as u32)
}

/// `E = K^n` with its flag `E_1 ⊂ ... ⊂ E_n`, `E_j` spanned by the first `j`
/// basis vectors.
#[derive(Debug, Clone)]
pub struct TensorContext<F: Field> {
    pub n: usize,
    pub field: F,
}

impl<F: Field> TensorContext<F> {
    pub fn new(field: &F, n: usize) -> Self {
        TensorContext {
            n,
            field: field.clone(),
        }
    }

    pub fn flag(&self, j: usize) -> RowSpace<F> {
        RowSpace::coordinate(&self.field, self.n, 0..j.min(self.n))
    }

    /// Coordinates of `E_j ⊗ E_k` inside `E ⊗ E`, increasing.
    pub fn flag_pair_coords(&self, j: usize, k: usize) -> Vec<usize> {
        (0..j)
            .flat_map(|a| (0..k).map(move |b| a * self.n + b))
            .collect()
    }
}

/// A subspace `L ⊆ E ⊗ E` with a record of how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSubspace<F: Field> {
    pub n: usize,
    pub space: RowSpace<F>,
    pub construction: String,
    pub seed: Option<u64>,
}

impl<F: Field> WitnessSubspace<F> {
    pub fn new(n: usize, space: RowSpace<F>, construction: impl Into<String>) -> Result<Self, TensorError> {
        if space.ambient() != n * n {
            return Err(TensorError::NotSquare {
                ambient: space.ambient(),
                n,
            });
        }
        Ok(WitnessSubspace {
            n,
            space,
            construction: construction.into(),
            seed: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The relation count `n^2 - dim L` this subspace corresponds to.
    pub fn d(&self) -> usize {
        self.n * self.n - self.space.dim()
    }

    pub fn field(&self) -> &F {
        self.space.field()
    }

    pub fn context(&self) -> TensorContext<F> {
        TensorContext::new(self.field(), self.n)
    }

    /// Subspace file text with the witness header.
    pub fn to_text(&self) -> String {
        let mut head = format!("n {}; construction {}", self.n, self.construction);
        if let Some(s) = self.seed {
            head.push_str(&format!("; seed {s}"));
        }
        format!("{head}\n{}", write_subspace_sparse(&self.space))
    }

    /// Reads a witness file written by [`WitnessSubspace::to_text`].
    pub fn from_text(field: &F, text: &str) -> Result<Self, TensorError> {
        let (header, extra) = read_subspace_header(text)?;
        let mut n = None;
        let mut construction = String::from("file");
        let mut seed = None;
        for (k, v) in extra {
            match k.as_str() {
                "n" => n = Some(v.parse::<usize>().map_err(|_| TensorError::Format(format!("bad n {v:?}")))?),
                "construction" => construction = v,
                "seed" => seed = Some(v.parse::<u64>().map_err(|_| TensorError::Format(format!("bad seed {v:?}")))?),
                _ => {}
            }
        }
        let n = match n {
            Some(n) => n,
            None => {
                let r = (header.ambient as f64).sqrt().round() as usize;
                if r * r != header.ambient {
                    return Err(TensorError::NotSquare { ambient: header.ambient, n: r });
                }
                r
            }
        };
        let space = parse_subspace(field, text)?;
        let mut w = Self::new(n, space, construction)?;
        w.seed = seed;
        Ok(w)
    }
}

/// Field declared in a witness or subspace file header.
pub fn witness_field(text: &str) -> Result<FieldSpec, TensorError> {
    Ok(read_subspace_header(text)?.0.field)
}

/// Parses `"24-31+42"` (pairs of 1-based digits, `ab` = `e_a ⊗ e_b`) into a
/// vector of `E ⊗ E`. Only for `n <= 9`.
pub fn pair_vector<F: Field>(field: &F, n: usize, text: &str) -> Vec<F::Elem> {
    let mut v = vec![field.zero(); n * n];
    let mut sign = 1i64;
    let mut digits = Vec::new();
    let flush = |digits: &mut Vec<usize>, sign: i64, v: &mut Vec<F::Elem>| {
        if digits.is_empty() {
            return;
        }
        assert_eq!(digits.len(), 2, "pair notation takes two digits");
        let idx = (digits[0] - 1) * n + (digits[1] - 1);
        v[idx] = field.add(&v[idx], &field.from_i64(sign));
        digits.clear();
    };
    for c in text.chars() {
        match c {
            '+' | '-' => {
                flush(&mut digits, sign, &mut v);
                sign = if c == '-' { -1 } else { 1 };
            }
            d if d.is_ascii_digit() => digits.push(d.to_digit(10).unwrap() as usize),
            _ => {}
        }
    }
    flush(&mut digits, sign, &mut v);
    v
}

// ------------------------------------------------------------ E_q(L, E)

/// `E_q(L, E)` by the recursion `E_{k+1} = (E ⊗ E_k) ∩ (E_k ⊗ E)`, with no
/// decomposition. `q = 0, 1` give `K` and `E`.
pub fn eq_space_direct<F: Field>(
    l: &RowSpace<F>,
    n: usize,
    q: usize,
    max_ambient: usize,
) -> Result<RowSpace<F>, TensorError> {
    let f = l.field();
    let ambient = guarded_power(n, q, max_ambient)?;
    match q {
        0 | 1 => return Ok(RowSpace::full(f, ambient)),
        2 => return Ok(l.clone()),
        _ => {}
    }
    let e = RowSpace::full(f, n);
    let mut cur = l.clone();
    for k in 2..q {
        if cur.is_zero() {
            return Ok(RowSpace::zero(f, ambient));
        }
        let left = e.tensor(&cur)?;
        let right = cur.tensor(&e)?;
        cur = left.intersect(&right)?;
        debug_assert_eq!(cur.ambient(), pow(n, k + 1));
    }
    Ok(cur)
}

/// Finest partition of the generators such that every basis row of `L` lies
/// in a single `G_A ⊗ G_B`. Classes are sorted, ordered by least element.
pub fn generator_classes<F: Field>(l: &RowSpace<F>, n: usize) -> Vec<Vec<usize>> {
    let f = l.field();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for row in l.rows() {
        let mut first: Option<usize> = None;
        let mut second: Option<usize> = None;
        for (idx, x) in row.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            let (a, b) = (idx / n, idx % n);
            for (anchor, g) in [(&mut first, a), (&mut second, b)] {
                match *anchor {
                    None => *anchor = Some(g),
                    Some(h) => {
                        let (ra, rb) = (find(&mut parent, h), find(&mut parent, g));
                        if ra != rb {
                            parent[ra.max(rb)] = ra.min(rb);
                        }
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for g in 0..n {
        let r = find(&mut parent, g);
        classes.entry(r).or_default().push(g);
    }
    classes.into_values().collect()
}

/// `E_q(L, E)` split along a generator partition: one local space per tuple
/// of classes, zero tuples omitted.
#[derive(Debug, Clone)]
pub struct BlockedEqSpace<F: Field> {
    pub n: usize,
    pub q: usize,
    pub classes: Vec<Vec<usize>>,
    pub blocks: BTreeMap<Vec<usize>, RowSpace<F>>,
}

impl<F: Field> BlockedEqSpace<F> {
    pub fn dim(&self) -> usize {
        self.blocks.values().map(RowSpace::dim).sum()
    }

    /// Global coordinates of the local coordinates of a class tuple, increasing.
    fn global_coords(&self, tuple: &[usize]) -> Vec<usize> {
        let mut coords = vec![0usize];
        for &c in tuple {
            coords = coords
                .iter()
                .flat_map(|&base| self.classes[c].iter().map(move |&g| base * self.n + g))
                .collect();
        }
        coords
    }

    /// Assembles the global subspace of `E^{⊗q}`.
    pub fn assemble(&self, field: &F) -> RowSpace<F> {
        let ambient = pow(self.n, self.q);
        let mut rows: Vec<(usize, Vec<F::Elem>)> = Vec::new();
        for (tuple, space) in &self.blocks {
            let map = self.global_coords(tuple);
            let global = space.relabel_monotone(ambient, &map);
            for (r, &p) in global.rows().iter().zip(global.pivots()) {
                rows.push((p, r.clone()));
            }
        }
        rows.sort_by_key(|(p, _)| *p);
        RowSpace::from_rref_unchecked(field, ambient, rows.into_iter().map(|(_, r)| r).collect())
    }
}

/// Blocked computation of `E_q(L, E)` along [`generator_classes`]. Only the
/// local ambient of each class tuple is subject to `max_ambient`.
pub fn eq_space_blocked<F: Field>(
    l: &RowSpace<F>,
    n: usize,
    q: usize,
    max_ambient: usize,
) -> Result<BlockedEqSpace<F>, TensorError> {
    let f = l.field();
    let classes = generator_classes(l, n);
    let largest = classes.iter().map(Vec::len).max().unwrap_or(0);
    guarded_power(largest, q, max_ambient)?;
    let m = classes.len();
    let mut class_of = vec![0usize; n];
    for (c, members) in classes.iter().enumerate() {
        for &g in members {
            class_of[g] = c;
        }
    }
    let mut blocks: BTreeMap<Vec<usize>, RowSpace<F>> = BTreeMap::new();
    if q < 2 {
        let tuples: Vec<Vec<usize>> = if q == 0 { vec![vec![]] } else { (0..m).map(|c| vec![c]).collect() };
        for t in tuples {
            let size: usize = t.iter().map(|&c| classes[c].len()).product();
            blocks.insert(t, RowSpace::full(f, size));
        }
        return Ok(BlockedEqSpace { n, q, classes, blocks });
    }
    // degree 2: rows of L grouped by their class pair, projected to local coordinates
    let mut grouped: BTreeMap<Vec<usize>, Vec<Vec<F::Elem>>> = BTreeMap::new();
    for (row, &p) in l.rows().iter().zip(l.pivots()) {
        let key = vec![class_of[p / n], class_of[p % n]];
        let (ca, cb) = (&classes[key[0]], &classes[key[1]]);
        let local: Vec<F::Elem> = ca
            .iter()
            .flat_map(|&a| cb.iter().map(move |&b| a * n + b))
            .map(|idx| row[idx].clone())
            .collect();
        grouped.entry(key).or_default().push(local);
    }
    for (key, rows) in grouped {
        let size = classes[key[0]].len() * classes[key[1]].len();
        blocks.insert(key, RowSpace::from_rref_unchecked(f, size, rows));
    }
    for _ in 3..=q {
        let mut next = BTreeMap::new();
        for (tail, tail_space) in &blocks {
            for c0 in 0..m {
                let mut head_key = vec![c0];
                head_key.extend_from_slice(&tail[..tail.len() - 1]);
                let Some(head_space) = blocks.get(&head_key) else {
                    continue;
                };
                let left = RowSpace::full(f, classes[c0].len()).tensor(tail_space)?;
                let right = head_space.tensor(&RowSpace::full(f, classes[*tail.last().unwrap()].len()))?;
                let inter = left.intersect(&right)?;
                if !inter.is_zero() {
                    let mut key = vec![c0];
                    key.extend_from_slice(tail);
                    next.insert(key, inter);
                }
            }
        }
        blocks = next;
        if blocks.is_empty() {
            break;
        }
    }
    Ok(BlockedEqSpace { n, q, classes, blocks })
}

/// `E_q(L, E)` as a subspace of `E^{⊗q}`; the ambient `n^q` is capped.
pub fn eq_space<F: Field>(
    l: &RowSpace<F>,
    n: usize,
    q: usize,
    max_ambient: usize,
) -> Result<RowSpace<F>, TensorError> {
    guarded_power(n, q, max_ambient)?;
    if generator_classes(l, n).len() <= 1 {
        return eq_space_direct(l, n, q, max_ambient);
    }
    Ok(eq_space_blocked(l, n, q, max_ambient)?.assemble(l.field()))
}

/// `dim E_q(L, E)` without assembling the global space.
pub fn eq_dim<F: Field>(
    l: &RowSpace<F>,
    n: usize,
    q: usize,
    max_ambient: usize,
) -> Result<usize, TensorError> {
    if generator_classes(l, n).len() <= 1 {
        return Ok(eq_space_direct(l, n, q, max_ambient)?.dim());
    }
    Ok(eq_space_blocked(l, n, q, max_ambient)?.dim())
}

// ------------------------------------------------- relations and subspaces

/// `M^⊥`, where `M ⊆ E ⊗ E` is spanned by the relation coefficient vectors.
pub fn perp_of_relations<F: Field>(pres: &Presentation, field: &F) -> Result<WitnessSubspace<F>, TensorError> {
    let n = pres.n();
    for (index, r) in pres.raw_relations().iter().enumerate() {
        if r.degree() != 2 {
            return Err(TensorError::NotQuadratic {
                index,
                degree: r.degree(),
            });
        }
    }
    let m = RowSpace::span(field, n * n, pres.quadratic_vectors(field)?)?;
    WitnessSubspace::new(n, m.perp(), "perp-of-relations")
}

/// Relation space spanned by the coefficient vectors of `pres`.
pub fn relation_space<F: Field>(pres: &Presentation, field: &F) -> Result<RowSpace<F>, TensorError> {
    let n = pres.n();
    Ok(RowSpace::span(field, n * n, pres.quadratic_vectors(field)?)?)
}

// ------------------------------------------------------------ rank method

/// A quadratic algebra given by `d` coefficient vectors `c_j ∈ E ⊗ E`
/// (`f_j = Σ c_j[a n + b] x_a x_b`).
#[derive(Debug, Clone)]
pub struct GenericInstance<F: Field> {
    pub n: usize,
    field: F,
    coeffs: Vec<Vec<F::Elem>>,
    pub seed: Option<u64>,
}

impl<F: Field> GenericInstance<F> {
    pub fn new(field: &F, n: usize, coeffs: Vec<Vec<F::Elem>>) -> Result<Self, TensorError> {
        for c in &coeffs {
            if c.len() != n * n {
                return Err(TensorError::BadRelation {
                    len: c.len(),
                    expected: n * n,
                });
            }
        }
        Ok(GenericInstance {
            n,
            field: field.clone(),
            coeffs,
            seed: None,
        })
    }

    pub fn from_presentation(pres: &Presentation, field: &F) -> Result<Self, TensorError> {
        Self::new(field, pres.n(), pres.quadratic_vectors(field)?)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[Vec<F::Elem>] {
        &self.coeffs
    }

    pub fn with_relation(&self, c: Vec<F::Elem>) -> Result<Self, TensorError> {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(c);
        let mut out = Self::new(&self.field, self.n, coeffs)?;
        out.seed = self.seed;
        Ok(out)
    }

    /// `|Ω| = d (q - 1) n^(q-2)`.
    pub fn omega_size(&self, q: usize) -> usize {
        if q < 2 {
            return 0;
        }
        self.d() * (q - 1) * pow(self.n, q - 2)
    }

    /// Matrix of `e_{j,μ,ν} ↦ μ f_j ν` with rows ordered by `j`, then
    /// `deg μ`, then `μ`, then `ν` (lexicographic word indices).
    pub fn operator_matrix(&self, q: usize, max_ambient: usize) -> Result<Vec<Vec<F::Elem>>, TensorError> {
        let n = self.n;
        let cols = guarded_power(n, q, max_ambient)?;
        let mut rows = Vec::with_capacity(self.omega_size(q));
        if q < 2 {
            return Ok(rows);
        }
        for c in &self.coeffs {
            for dm in 0..=q - 2 {
                let dn = q - 2 - dm;
                let right = pow(n, dn);
                for mu in 0..pow(n, dm) {
                    for nu in 0..right {
                        let mut v = vec![self.field.zero(); cols];
                        for (ab, x) in c.iter().enumerate() {
                            if !self.field.is_zero(x) {
                                v[(mu * n * n + ab) * right + nu] = x.clone();
                            }
                        }
                        rows.push(v);
                    }
                }
            }
        }
        Ok(rows)
    }

    /// `dim R_q` for `q = 0..=q_max`.
    ///
    /// Uses `I_q = I_{q-1} ⊗ E + span{μ f_j}`: a basis of `R_{q-1}` is carried
    /// as the projection `π` of every word of degree `q-1`, and `R_q` is the
    /// quotient of `R_{q-1} ⊗ E` by the images of the `μ f_j`.
    pub fn dims(&self, q_max: usize, max_ambient: usize) -> Result<Vec<usize>, TensorError> {
        let f = &self.field;
        let n = self.n;
        guarded_power(n, q_max, max_ambient)?;
        let mut dims = vec![1usize];
        if q_max == 0 {
            return Ok(dims);
        }
        dims.push(n);
        type Sparse<E> = Vec<(usize, E)>;
        let mut pi: Vec<Sparse<F::Elem>> = (0..n).map(|a| vec![(a, f.one())]).collect();
        let mut r_prev = n;
        for q in 2..=q_max {
            if r_prev == 0 {
                dims.push(0);
                continue;
            }
            let width = r_prev * n;
            let mut ech = Echelon::new(f, width);
            'rows: for c in &self.coeffs {
                for mu in 0..pow(n, q - 2) {
                    let mut v = vec![f.zero(); width];
                    for (ab, x) in c.iter().enumerate() {
                        if f.is_zero(x) {
                            continue;
                        }
                        let (a, b) = (ab / n, ab % n);
                        for (s, y) in &pi[mu * n + a] {
                            let slot = &mut v[s * n + b];
                            *slot = f.add(slot, &f.mul(x, y));
                        }
                    }
                    ech.insert(v);
                    if ech.rank() == width {
                        break 'rows;
                    }
                }
            }
            let (rows, pivots) = ech.into_sorted();
            let r_q = width - rows.len();
            dims.push(r_q);
            if q == q_max || r_q == 0 {
                r_prev = r_q;
                continue;
            }
            // quotient map on each coordinate of R_{q-1} ⊗ E
            let mut is_pivot = vec![None; width];
            for (i, &p) in pivots.iter().enumerate() {
                is_pivot[p] = Some(i);
            }
            let mut local = vec![usize::MAX; width];
            let mut next = 0;
            for c in 0..width {
                if is_pivot[c].is_none() {
                    local[c] = next;
                    next += 1;
                }
            }
            let rho: Vec<Sparse<F::Elem>> = (0..width)
                .map(|c| match is_pivot[c] {
                    None => vec![(local[c], f.one())],
                    Some(i) => rows[i]
                        .iter()
                        .enumerate()
                        .filter(|(c2, x)| is_pivot[*c2].is_none() && !f.is_zero(x))
                        .map(|(c2, x)| (local[c2], f.neg(x)))
                        .collect(),
                })
                .collect();
            let mut scratch = vec![f.zero(); r_q];
            let mut touched = Vec::new();
            let mut next_pi = Vec::with_capacity(pi.len() * n);
            for w in &pi {
                for b in 0..n {
                    for (s, x) in w {
                        for (t, y) in &rho[s * n + b] {
                            if f.is_zero(&scratch[*t]) {
                                touched.push(*t);
                            }
                            scratch[*t] = f.add(&scratch[*t], &f.mul(x, y));
                        }
                    }
                    touched.sort_unstable();
                    touched.dedup();
                    let mut out = Vec::with_capacity(touched.len());
                    for &t in &touched {
                        let v = std::mem::replace(&mut scratch[t], f.zero());
                        if !f.is_zero(&v) {
                            out.push((t, v));
                        }
                    }
                    touched.clear();
                    next_pi.push(out);
                }
            }
            pi = next_pi;
            r_prev = r_q;
        }
        Ok(dims)
    }
}

impl GenericInstance<PrimeField> {
    /// `d` relations with independent uniform coefficients.
    pub fn random(field: &PrimeField, n: usize, d: usize, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        let coeffs = (0..d)
            .map(|_| (0..n * n).map(|_| rng.gen_range(0..field.modulus())).collect())
            .collect();
        GenericInstance {
            n,
            field: *field,
            coeffs,
            seed: Some(seed),
        }
    }
}

/// Convenience form of [`GenericInstance::dims`] at one degree.
pub fn dims_via_rank<F: Field>(inst: &GenericInstance<F>, q: usize, max_ambient: usize) -> Result<usize, TensorError> {
    Ok(inst.dims(q, max_ambient)?[q])
}

/// Monte Carlo estimate of the generic Hilbert series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericReport {
    pub n: usize,
    pub d: usize,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    /// Coefficientwise minimum over trials.
    pub series: TruncatedSeries,
    pub per_trial: Vec<Vec<usize>>,
    /// Number of trials attaining the minimum, per degree.
    pub agreement: Vec<usize>,
}

/// Runs `trials` random instances (seeds `seed, seed + 1, ...`) over GF(p).
pub fn generic_dims(
    n: usize,
    d: usize,
    cap: usize,
    trials: usize,
    seed: u64,
    p: u64,
    max_ambient: usize,
) -> Result<GenericReport, TensorError> {
    if d > n * n {
        return Err(TensorError::BadParameter {
            name: "generic".into(),
            requirement: format!("0 <= d <= n^2 = {}", n * n),
        });
    }
    if trials == 0 {
        return Err(TensorError::BadParameter {
            name: "generic".into(),
            requirement: "at least one trial".into(),
        });
    }
    let field = PrimeField::new(p)?;
    guarded_power(n, cap, max_ambient)?;
    let per_trial: Vec<Vec<usize>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..trials)
            .map(|t| {
                let field = &field;
                scope.spawn(move || {
                    GenericInstance::random(field, n, d, seed.wrapping_add(t as u64)).dims(cap, max_ambient)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("trial thread")).collect::<Result<_, _>>()
    })?;
    let mins: Vec<usize> = (0..=cap)
        .map(|q| per_trial.iter().map(|t| t[q]).min().unwrap())
        .collect();
    let agreement = (0..=cap)
        .map(|q| per_trial.iter().filter(|t| t[q] == mins[q]).count())
        .collect();
    Ok(GenericReport {
        n,
        d,
        prime: p,
        seed,
        trials,
        series: TruncatedSeries::from_dims(&mins),
        per_trial,
        agreement,
    })
}

// ---------------------------------------------------------- block sums

/// Block sizes `n_1, ..., n_m` of `G = E_{n_1} ⊕ ... ⊕ E_{n_m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockLayout(Vec<usize>);

impl BlockLayout {
    pub fn new(sizes: Vec<usize>) -> Result<Self, TensorError> {
        if sizes.is_empty() {
            return Err(TensorError::EmptyLayout);
        }
        Ok(BlockLayout(sizes))
    }

    /// `m` copies of `n`.
    pub fn repeated(n: usize, m: usize) -> Self {
        BlockLayout(vec![n; m.max(1)])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// `dim G`.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    fn offsets(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect()
    }
}

impl fmt::Display for BlockLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for BlockLayout {
    type Err = TensorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sizes = s
            .trim_matches(|c| c == '(' || c == ')' || c == ' ')
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| TensorError::Format(format!("bad layout {s:?}")))?;
        Self::new(sizes)
    }
}

/// `L_{j,k} = (E_j ⊗ E_k) ∩ L` in local coordinates of `K^j ⊗ K^k`.
pub fn flag_block<F: Field>(l: &WitnessSubspace<F>, j: usize, k: usize) -> Result<RowSpace<F>, TensorError> {
    let n = l.n;
    for s in [j, k] {
        if s == 0 || s > n {
            return Err(TensorError::BlockSize { size: s, n });
        }
    }
    Ok(l.space.restrict_to_support(&l.context().flag_pair_coords(j, k)))
}

/// Result of a block direct sum.
#[derive(Debug, Clone)]
pub struct BlockSum<F: Field> {
    pub witness: WitnessSubspace<F>,
    pub layout: BlockLayout,
    /// `dim L_{n_j, n_k}` for block positions `j, k`.
    pub block_dims: Vec<Vec<usize>>,
}

/// `L_G = ⊕_{j,k} L_{n_j, n_k}` inside `G ⊗ G`.
pub fn block_sum<F: Field>(l: &WitnessSubspace<F>, layout: &BlockLayout) -> Result<BlockSum<F>, TensorError> {
    let f = l.field();
    let total = layout.total();
    let offsets = layout.offsets();
    let mut cache: BTreeMap<(usize, usize), RowSpace<F>> = BTreeMap::new();
    let mut rows: Vec<(usize, Vec<F::Elem>)> = Vec::new();
    let m = layout.m();
    let mut block_dims = vec![vec![0; m]; m];
    for (j, &sj) in layout.sizes().iter().enumerate() {
        for (k, &sk) in layout.sizes().iter().enumerate() {
            if !cache.contains_key(&(sj, sk)) {
                cache.insert((sj, sk), flag_block(l, sj, sk)?);
            }
            let local = &cache[&(sj, sk)];
            block_dims[j][k] = local.dim();
            let (oj, ok) = (offsets[j], offsets[k]);
            let map: Vec<usize> = (0..sj)
                .flat_map(|a| (0..sk).map(move |b| (oj + a) * total + ok + b))
                .collect();
            let global = local.relabel_monotone(total * total, &map);
            for (r, &p) in global.rows().iter().zip(global.pivots()) {
                rows.push((p, r.clone()));
            }
        }
    }
    rows.sort_by_key(|(p, _)| *p);
    let space = RowSpace::from_rref_unchecked(f, total * total, rows.into_iter().map(|(_, r)| r).collect());
    let mut witness = WitnessSubspace::new(total, space, format!("{} block {layout}", l.construction))?;
    witness.seed = l.seed;
    Ok(BlockSum {
        witness,
        layout: layout.clone(),
        block_dims,
    })
}

/// `dim L_{s,t}` for every pair of requested sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDimTable {
    pub sizes: Vec<usize>,
    pub dims: Vec<Vec<usize>>,
}

impl BlockDimTable {
    pub fn get(&self, s: usize, t: usize) -> Option<usize> {
        let i = self.sizes.iter().position(|&x| x == s)?;
        let j = self.sizes.iter().position(|&x| x == t)?;
        Some(self.dims[i][j])
    }

    /// `dim L_{s,t} + dim L_{t,s}`.
    pub fn pair_sum(&self, s: usize, t: usize) -> Option<usize> {
        Some(self.get(s, t)? + self.get(t, s)?)
    }
}

pub fn block_dims<F: Field>(l: &WitnessSubspace<F>, sizes: &[usize]) -> Result<BlockDimTable, TensorError> {
    let dims = sizes
        .iter()
        .map(|&s| sizes.iter().map(|&t| Ok(flag_block(l, s, t)?.dim())).collect::<Result<Vec<_>, TensorError>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockDimTable {
        sizes: sizes.to_vec(),
        dims,
    })
}

/// `m` diagonal copies of a witness with `E_q(L, E) = 0`; the vanishing is
/// re-checked on the result.
pub fn inflate<F: Field>(
    l: &WitnessSubspace<F>,
    m: usize,
    q: usize,
    max_ambient: usize,
) -> Result<WitnessSubspace<F>, TensorError> {
    if m <= 1 {
        return Ok(l.clone());
    }
    let mut w = block_sum(l, &BlockLayout::repeated(l.n, m))?.witness;
    w.construction = format!("{} inflated x{m}", l.construction);
    let dim = eq_dim(&w.space, w.n, q, max_ambient)?;
    if dim != 0 {
        return Err(TensorError::VerificationFailed { q, dim });
    }
    Ok(w)
}

// ---------------------------------------------------- named constructions

const COR_3_41: [&str; 5] = ["21", "32", "31", "11-22", "11-33"];

const COR_3_31: [&str; 6] = [
    "33+12+11+22",
    "23+11+22",
    "13+11+22",
    "21-11-22",
    "32-11-22",
    "31+11-21",
];

const G30: [&str; 30] = [
    "12", "23", "13", "11-22", "11-33",
    "24-31+42", "14-32+41", "11-44", "21-43", "11-55",
    "51-34", "54-42", "53-32+41", "52-45-24+35", "25-35-32+14",
    "11-66", "61-15", "56", "46-62+34-24", "64-21-35-36+52-24",
    "26-14-63-35+41", "65-42", "11-77", "71-16", "37-74-46+24+41",
    "57-76-21+34", "72-61-64+35", "27-73+24-42", "67-35-52+24", "75-47+63-41-14",
];

/// Named subspace constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    /// 5-dimensional `L` with `E_4 = 0`, `n = 3`.
    Cor341,
    /// 6-dimensional `L` with `E_5 = 0`, `n = 3`.
    Cor331,
    /// The 30 vectors `g_1..g_30`, `n = 7`.
    G30,
    /// The pair `(L_0, M)` for `1 <= r < n`.
    Alp4 { n: usize, r: usize },
    /// Block sums of `Cor341` vanishing in degree 4.
    Gfield(usize),
    /// Block sums of `Cor331` vanishing in degree 5.
    Whatnot1(usize),
}

pub const CONSTRUCTION_NAMES: &[&str] = &["cor3-41", "cor3-31", "g30", "alp4(n,r)", "gfield(n)", "whatnot1(n)"];

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Cor341 => write!(f, "cor3-41"),
            Construction::Cor331 => write!(f, "cor3-31"),
            Construction::G30 => write!(f, "g30"),
            Construction::Alp4 { n, r } => write!(f, "alp4({n},{r})"),
            Construction::Gfield(n) => write!(f, "gfield({n})"),
            Construction::Whatnot1(n) => write!(f, "whatnot1({n})"),
        }
    }
}

impl FromStr for Construction {
    type Err = TensorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => (name.trim().to_string(), rest.trim_end_matches(')').to_string()),
            None => (s.clone(), String::new()),
        };
        let nums: Vec<usize> = args
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| TensorError::UnknownConstruction(s.clone()))?;
        let unknown = || TensorError::UnknownConstruction(s.clone());
        match (name.as_str(), nums.as_slice()) {
            ("cor3-41", []) => Ok(Construction::Cor341),
            ("cor3-31", []) => Ok(Construction::Cor331),
            ("g30", []) => Ok(Construction::G30),
            ("alp4", [n, r]) => Ok(Construction::Alp4 { n: *n, r: *r }),
            ("gfield", [n]) => Ok(Construction::Gfield(*n)),
            ("whatnot1", [n]) => Ok(Construction::Whatnot1(*n)),
            _ => Err(unknown()),
        }
    }
}

impl Construction {
    /// With a parameter supplied separately, as on the command line
    /// (`gfield --n 5`).
    pub fn parse_with(name: &str, n: Option<usize>, r: Option<usize>) -> Result<Self, TensorError> {
        let bare = name.trim().to_ascii_lowercase();
        let text = match (bare.as_str(), n, r) {
            ("alp4", Some(n), Some(r)) => format!("alp4({n},{r})"),
            ("gfield" | "whatnot1", Some(n), _) => format!("{bare}({n})"),
            _ => bare,
        };
        text.parse()
    }

    /// Degree in which the construction is meant to vanish.
    pub fn vanishing_degree(&self) -> usize {
        match self {
            Construction::Cor331 | Construction::Whatnot1(_) => 5,
            _ => 4,
        }
    }
}

/// A built subspace: a single witness, or the pair `(L_0, M)` of the alp4
/// construction.
#[derive(Debug, Clone)]
pub enum Built<F: Field> {
    Witness(WitnessSubspace<F>),
    Pair { l0: WitnessSubspace<F>, m: WitnessSubspace<F> },
}

fn from_pairs<F: Field>(field: &F, n: usize, vectors: &[&str], name: &str) -> Result<WitnessSubspace<F>, TensorError> {
    let rows = vectors.iter().map(|s| pair_vector(field, n, s)).collect();
    WitnessSubspace::new(n, RowSpace::span(field, n * n, rows)?, name)
}

/// The `(L_0, M)` pair: `M = span{e_j e_k : max(j,k) > r}` and `L_0` spanned
/// by `e_j e_k` (`j, k <= r`) and `e_j e_k + e_k e_j` (`j <= r < k`).
pub fn alp4_pair<F: Field>(field: &F, n: usize, r: usize) -> Result<(WitnessSubspace<F>, WitnessSubspace<F>), TensorError> {
    if r == 0 || r >= n {
        return Err(TensorError::Alp4Hypothesis(format!("need 1 <= r < n, got n = {n}, r = {r}")));
    }
    let d = n * n - r * r;
    if d * d + n * n * d > pow(n, 4) {
        return Err(TensorError::Alp4Hypothesis(format!(
            "d^2 + n^2 d = {} > n^4 = {} with d = {d}",
            d * d + n * n * d,
            pow(n, 4)
        )));
    }
    let m_coords = (0..n * n).filter(|&i| (i / n).max(i % n) >= r);
    let m = RowSpace::coordinate(field, n * n, m_coords);
    let mut rows = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let mut v = vec![field.zero(); n * n];
            if j < r && k < r {
                v[j * n + k] = field.one();
            } else if j < r && k >= r {
                v[j * n + k] = field.one();
                v[k * n + j] = field.one();
            } else {
                continue;
            }
            rows.push(v);
        }
    }
    let l0 = RowSpace::span(field, n * n, rows)?;
    let name = format!("alp4({n},{r})");
    Ok((WitnessSubspace::new(n, l0, name.clone())?, WitnessSubspace::new(n, m, name)?))
}

/// Layout for the degree-4 family built from `cor3-41`.
pub fn gfield_layout(n: usize) -> Result<BlockLayout, TensorError> {
    let k = n / 3;
    let sizes = match n % 3 {
        _ if n < 2 => {
            return Err(TensorError::BadParameter {
                name: "gfield".into(),
                requirement: "n >= 2".into(),
            })
        }
        0 => vec![3; k],
        2 => std::iter::once(2).chain(std::iter::repeat(3).take(k)).collect(),
        _ => {
            if k == 0 {
                return Err(TensorError::BadParameter {
                    name: "gfield".into(),
                    requirement: "n >= 2".into(),
                });
            }
            [2, 2].into_iter().chain(std::iter::repeat(3).take(k - 1)).collect()
        }
    };
    BlockLayout::new(sizes)
}

/// Layout for the degree-5 family built from `cor3-31`.
pub fn whatnot1_layout(n: usize) -> Result<BlockLayout, TensorError> {
    if n < 2 {
        return Err(TensorError::BadParameter {
            name: "whatnot1".into(),
            requirement: "n >= 2".into(),
        });
    }
    let k = n / 3;
    let head = match n % 3 {
        0 => None,
        2 => Some(2),
        _ => Some(1),
    };
    BlockLayout::new(head.into_iter().chain(std::iter::repeat(3).take(k)).collect())
}

/// Builds a named construction over `field`.
pub fn builtin_subspace<F: Field>(field: &F, c: Construction) -> Result<Built<F>, TensorError> {
    let w = match c {
        Construction::Cor341 => from_pairs(field, 3, &COR_3_41, "cor3-41")?,
        Construction::Cor331 => from_pairs(field, 3, &COR_3_31, "cor3-31")?,
        Construction::G30 => from_pairs(field, 7, &G30, "g30")?,
        Construction::Alp4 { n, r } => {
            let (l0, m) = alp4_pair(field, n, r)?;
            return Ok(Built::Pair { l0, m });
        }
        Construction::Gfield(n) => {
            let base = from_pairs(field, 3, &COR_3_41, "cor3-41")?;
            let mut w = block_sum(&base, &gfield_layout(n)?)?.witness;
            w.construction = c.to_string();
            w
        }
        Construction::Whatnot1(n) => {
            let base = from_pairs(field, 3, &COR_3_31, "cor3-31")?;
            let mut w = block_sum(&base, &whatnot1_layout(n)?)?.witness;
            w.construction = c.to_string();
            w
        }
    };
    Ok(Built::Witness(w))
}

/// Like [`builtin_subspace`] but only for single-witness constructions.
pub fn builtin_witness<F: Field>(field: &F, c: Construction) -> Result<WitnessSubspace<F>, TensorError> {
    match builtin_subspace(field, c)? {
        Built::Witness(w) => Ok(w),
        Built::Pair { .. } => Err(TensorError::BadParameter {
            name: c.to_string(),
            requirement: "a single-witness construction".into(),
        }),
    }
}

/// Checks `(L ⊗ L) ∩ (E ⊗ M ⊗ E) = 0` for a `d`-dimensional `L ⊆ L_0` built
/// from small random integer combinations (seeded).
pub fn alp4_check_in<F: Field>(field: &F, n: usize, r: usize, seed: u64, max_ambient: usize) -> Result<bool, TensorError> {
    let (l0, m) = alp4_pair(field, n, r)?;
    let ambient = guarded_power(n, 4, max_ambient)?;
    let d = m.space.dim();
    if d > l0.dim() {
        return Err(TensorError::Alp4Hypothesis(format!("d = {d} exceeds dim L_0 = {}", l0.dim())));
    }
    let mut rng = seeded_rng(seed);
    let l = loop {
        let rows: Vec<Vec<F::Elem>> = (0..d)
            .map(|_| {
                let mut v = vec![field.zero(); n * n];
                for b in l0.space.rows() {
                    let c = field.from_i64(rng.gen_range(-9..=9));
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = field.add(x, &field.mul(&c, y));
                    }
                }
                v
            })
            .collect();
        let l = RowSpace::span(field, n * n, rows)?;
        if l.dim() == d {
            break l;
        }
    };
    let e = RowSpace::full(field, n);
    let ll = l.tensor(&l)?;
    let eme = e.tensor(&m.space)?.tensor(&e)?;
    debug_assert_eq!(ll.ambient(), ambient);
    Ok(ll.intersect(&eme)?.is_zero())
}

pub fn alp4_check(n: usize, r: usize, field: FieldSpec, seed: u64, max_ambient: usize) -> Result<bool, TensorError> {
    crate::with_field!(field, f => alp4_check_in(&f, n, r, seed, max_ambient))
}

// --------------------------------------------------------- certification

/// Side conditions for reading a characteristic-0 claim off a mod-p
/// computation: the integer basis of `L` and of `L^⊥` keep their rank mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferCheck {
    pub prime: u64,
    pub dim_rational: usize,
    pub rank_mod_p: usize,
    pub perp_dim_rational: usize,
    pub perp_rank_mod_p: usize,
}

impl TransferCheck {
    pub fn holds(&self) -> bool {
        self.rank_mod_p == self.dim_rational && self.perp_rank_mod_p == self.perp_dim_rational
    }
}

fn integer_rows_mod_p(rows: &[Vec<BigRational>], f: &PrimeField) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter()
                .map(|x| f.from_bigint(&(x.numer() * (&lcm / x.denom()))))
                .collect()
        })
        .collect()
}

/// Reduces a rational subspace to GF(p) through integer-scaled basis rows and
/// records the transfer side conditions.
pub fn reduce_mod_p(l: &RowSpace<Rationals>, p: u64) -> Result<(RowSpace<PrimeField>, TransferCheck), TensorError> {
    let f = PrimeField::new(p)?;
    let ambient = l.ambient();
    let rows = integer_rows_mod_p(l.rows(), &f);
    let reduced = RowSpace::span(&f, ambient, rows)?;
    let perp = l.perp();
    let perp_rows = integer_rows_mod_p(perp.rows(), &f);
    let perp_rank = crate::linalg::rank(&f, &perp_rows)?;
    let check = TransferCheck {
        prime: p,
        dim_rational: l.dim(),
        rank_mod_p: reduced.dim(),
        perp_dim_rational: perp.dim(),
        perp_rank_mod_p: perp_rank,
    };
    Ok((reduced, check))
}

/// Exact record of an `h_q(K, n, d) = 0` claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingCertificate {
    pub construction: String,
    pub n: usize,
    pub d: usize,
    pub q: usize,
    /// Field the claim is about.
    pub claim_field: FieldSpec,
    /// Field the subspace computation ran over.
    pub computed_over: FieldSpec,
    pub eq_dim: usize,
    pub transfer: Option<TransferCheck>,
}

impl VanishingCertificate {
    pub fn holds(&self) -> bool {
        self.eq_dim == 0 && self.transfer.map_or(true, |t| t.holds())
    }
}

impl fmt::Display for VanishingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h_{}({}, {}, {}) = 0 via {}: dim E_{} = {} over {}",
            self.q, self.claim_field, self.n, self.d, self.construction, self.q, self.eq_dim, self.computed_over
        )?;
        if let Some(t) = self.transfer {
            write!(
                f,
                "; transfer rank {}/{} perp {}/{} ({})",
                t.rank_mod_p,
                t.dim_rational,
                t.perp_rank_mod_p,
                t.perp_dim_rational,
                if t.holds() { "ok" } else { "FAILED" }
            )?;
        }
        Ok(())
    }
}

/// Certificate computed directly over the witness's own field.
pub fn certify_vanishing<F: Field>(w: &WitnessSubspace<F>, q: usize, max_ambient: usize) -> Result<VanishingCertificate, TensorError> {
    let spec = w.field().spec();
    Ok(VanishingCertificate {
        construction: w.construction.clone(),
        n: w.n,
        d: w.d(),
        q,
        claim_field: spec,
        computed_over: spec,
        eq_dim: eq_dim(&w.space, w.n, q, max_ambient)?,
        transfer: None,
    })
}

/// Characteristic-0 certificate from a computation over GF(p).
pub fn certify_vanishing_rational(
    w: &WitnessSubspace<Rationals>,
    q: usize,
    p: u64,
    max_ambient: usize,
) -> Result<VanishingCertificate, TensorError> {
    let (reduced, transfer) = reduce_mod_p(&w.space, p)?;
    Ok(VanishingCertificate {
        construction: w.construction.clone(),
        n: w.n,
        d: w.d(),
        q,
        claim_field: FieldSpec::Rational,
        computed_over: FieldSpec::Prime(p),
        eq_dim: eq_dim(&reduced, w.n, q, max_ambient)?,
        transfer: Some(transfer),
    })
}

/// Same subspace over another field when its basis is integral with entries
/// representable there (used to move witnesses between fields).
pub fn rational_to_field<F: Field>(l: &WitnessSubspace<Rationals>, field: &F) -> Result<WitnessSubspace<F>, TensorError> {
    let rows = l
        .space
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| field.from_ratio(x.numer(), x.denom())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = WitnessSubspace::new(l.n, RowSpace::span(field, l.n * l.n, rows)?, l.construction.clone())?;
    w.seed = l.seed;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::DEFAULT_PRIME;
    use crate::freealg::builtin_presentation;
    use crate::groebner::hilbert_series;

    const CAP: usize = DEFAULT_MAX_AMBIENT;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random_space(f: &PrimeField, rng: &mut impl Rng, ambient: usize, k: usize) -> RowSpace<PrimeField> {
        let rows = (0..k).map(|_| (0..ambient).map(|_| rng.gen_range(0..f.modulus())).collect()).collect();
        RowSpace::span(f, ambient, rows).unwrap()
    }

    #[test]
    fn eq_space_examples() {
        let f = Rationals;
        let full = RowSpace::full(&f, 4);
        assert_eq!(eq_space(&full, 2, 4, CAP).unwrap().dim(), 16);
        let l = RowSpace::coordinate(&f, 4, [0]);
        let e3 = eq_space(&l, 2, 3, CAP).unwrap();
        assert_eq!(e3, RowSpace::coordinate(&f, 8, [0]));
        let cor = builtin_witness(&f, Construction::Cor341).unwrap();
        assert_eq!(cor.dim(), 5);
        assert_eq!(eq_dim(&cor.space, 3, 4, CAP).unwrap(), 0);
        assert!(matches!(eq_space(&full, 2, 20, CAP), Err(TensorError::SizeGuard { .. })));
    }

    #[test]
    fn generator_partition() {
        let f = Rationals;
        let cor = builtin_witness(&f, Construction::Cor341).unwrap();
        assert_eq!(generator_classes(&cor.space, 3), vec![vec![0, 1, 2]]);
        let g = block_sum(&cor, &BlockLayout::new(vec![3, 3]).unwrap()).unwrap().witness;
        assert_eq!(generator_classes(&g.space, 6), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(generator_classes(&RowSpace::full(&f, 4), 2), vec![vec![0], vec![1]]);
    }

    #[test]
    fn blocked_and_direct_agree() {
        let f = gf(7);
        let mut rng = seeded_rng(10);
        for _ in 0..12 {
            let n = rng.gen_range(2..=3);
            let k = rng.gen_range(1..=n * n);
            let base = WitnessSubspace::new(n, random_space(&f, &mut rng, n * n, k), "random").unwrap();
            let m = rng.gen_range(1..=3);
            let layout = BlockLayout::new((0..m).map(|_| rng.gen_range(1..=n)).collect()).unwrap();
            let g = block_sum(&base, &layout).unwrap().witness;
            for q in 2..=4 {
                if pow(g.n, q) > 5000 {
                    continue;
                }
                let direct = eq_space_direct(&g.space, g.n, q, CAP).unwrap();
                let blocked = eq_space_blocked(&g.space, g.n, q, CAP).unwrap().assemble(&f);
                assert_eq!(direct, blocked, "layout {layout} q {q}");
            }
        }
    }

    #[test]
    fn perp_of_builtin_relations() {
        let f = Rationals;
        let p = builtin_presentation("lemma3-4", None).unwrap();
        assert_eq!(perp_of_relations(&p, &f).unwrap().space, builtin_witness(&f, Construction::Cor341).unwrap().space);
        let p = builtin_presentation("lemma3-3", None).unwrap();
        assert_eq!(perp_of_relations(&p, &f).unwrap().space, builtin_witness(&f, Construction::Cor331).unwrap().space);
        let p = crate::freealg::parse_presentation("gens 3").unwrap();
        assert_eq!(perp_of_relations(&p, &f).unwrap().space, RowSpace::full(&f, 9));
        let g2 = gf(2);
        let p = builtin_presentation("ex7-19", None).unwrap();
        let g30 = builtin_witness(&g2, Construction::G30).unwrap();
        assert_eq!(g30.dim(), 30);
        // the printed g-list is orthogonal to every relation except the third,
        // and matches exactly once that relation's x3*x5 term is read as x7*x2
        let m = relation_space(&p, &g2).unwrap();
        let bad: Vec<usize> = m.rows().iter().enumerate().filter(|(_, r)| !g30.space.perp().contains(r)).map(|(i, _)| i).collect();
        assert!(!bad.is_empty());
        assert_ne!(perp_of_relations(&p, &g2).unwrap().space, g30.space);
        let text = crate::freealg::builtin_text("ex7-19").unwrap().replace("x3*x5 + x2*x1", "x7*x2 + x2*x1");
        let alt = crate::freealg::parse_presentation(&text).unwrap();
        assert_eq!(perp_of_relations(&alt, &g2).unwrap().space, g30.space);
    }

    #[test]
    fn rank_method_examples() {
        let f = gf(DEFAULT_PRIME);
        let p = builtin_presentation("lemma3-3", Some(FieldSpec::Prime(DEFAULT_PRIME))).unwrap();
        let inst = GenericInstance::from_presentation(&p, &f).unwrap();
        assert_eq!(inst.dims(5, CAP).unwrap(), vec![1, 3, 6, 9, 9, 0]);
        let inst = GenericInstance::random(&f, 5, 10, 1);
        assert_eq!(dims_via_rank(&inst, 3, CAP).unwrap(), 25);
        let inst = GenericInstance::random(&f, 3, 0, 1);
        assert_eq!(inst.dims(4, CAP).unwrap(), vec![1, 3, 9, 27, 81]);
    }

    #[test]
    fn structured_rank_matches_operator_matrix() {
        let f = gf(101);
        for seed in 0..10 {
            for (n, d) in [(2, 1), (2, 2), (3, 3), (3, 4), (2, 3)] {
                let inst = GenericInstance::random(&f, n, d, seed);
                let dims = inst.dims(5, CAP).unwrap();
                for (q, &dim) in dims.iter().enumerate().take(6).skip(2) {
                    let mat = inst.operator_matrix(q, CAP).unwrap();
                    assert_eq!(mat.len(), inst.omega_size(q));
                    let r = crate::linalg::rank(&f, &mat).unwrap();
                    assert_eq!(dim, pow(n, q) - r, "n={n} d={d} q={q} seed={seed}");
                }
            }
        }
    }

    #[test]
    fn three_routes_agree_on_builtins() -> Result<(), TensorError> {
        for name in ["lemma3-4", "lemma3-3", "ex4-5", "ex4-6", "commutative(3)"] {
            let p = builtin_presentation(name, None).unwrap();
            let h = hilbert_series(&p, 4).unwrap().to_i64().unwrap();
            crate::with_field!(p.field(), f => {
                let inst = GenericInstance::from_presentation(&p, &f).unwrap();
                let rank_dims = inst.dims(4, CAP).unwrap();
                let l = perp_of_relations(&p, &f).unwrap();
                for q in 0..=4 {
                    assert_eq!(rank_dims[q] as i64, h[q], "{name} q={q}");
                    assert_eq!(eq_dim(&l.space, p.n(), q, CAP).unwrap() as i64, h[q], "{name} q={q}");
                }
                Ok::<(), TensorError>(())
            })?;
        }
        Ok(())
    }

    #[test]
    fn monotone_under_extra_relations_and_generator_deletion() {
        let f = gf(DEFAULT_PRIME);
        let mut rng = seeded_rng(77);
        for seed in 0..5 {
            let n = 3;
            let inst = GenericInstance::random(&f, n, 2, seed);
            let base = inst.dims(4, CAP).unwrap();
            let extra: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..f.modulus())).collect();
            let more = inst.with_relation(extra).unwrap().dims(4, CAP).unwrap();
            assert!(more.iter().zip(&base).all(|(a, b)| a <= b));
            // quotient by x_n: relations x_n x_i and x_i x_n
            let mut q = inst.clone();
            for i in 0..n {
                for v in [(n - 1) * n + i, i * n + n - 1] {
                    let mut c = vec![0u64; n * n];
                    c[v] = 1;
                    q = q.with_relation(c).unwrap();
                }
            }
            let less = q.dims(4, CAP).unwrap();
            assert!(less.iter().zip(&base).all(|(a, b)| a <= b));
        }
    }

    #[test]
    fn block_sum_examples() {
        let f = Rationals;
        let cor = builtin_witness(&f, Construction::Cor341).unwrap();
        let s = block_sum(&cor, &BlockLayout::new(vec![3, 3]).unwrap()).unwrap();
        assert_eq!((s.witness.dim(), s.witness.space.ambient()), (20, 36));
        let s = block_sum(&cor, &BlockLayout::new(vec![2, 3]).unwrap()).unwrap();
        assert_eq!(s.block_dims, vec![vec![2, 2], vec![4, 5]]);
        assert_eq!(s.witness.dim(), 13);
        let s = block_sum(&cor, &BlockLayout::new(vec![3]).unwrap()).unwrap();
        assert_eq!(s.witness.space, cor.space);
        assert!(matches!(block_sum(&cor, &BlockLayout::new(vec![4]).unwrap()), Err(TensorError::BlockSize { .. })));
    }

    #[test]
    fn g30_block_dims() {
        let f = gf(DEFAULT_PRIME);
        let g = builtin_witness(&f, Construction::G30).unwrap();
        let t = block_dims(&g, &[4, 5, 6, 7]).unwrap();
        let diag: Vec<usize> = (4..=7).map(|s| t.get(s, s).unwrap()).collect();
        assert_eq!(diag, vec![9, 15, 22, 30]);
        assert!(t.pair_sum(6, 7).unwrap() >= 47);
        assert!(t.pair_sum(5, 6).unwrap() >= 33);
        assert!(t.pair_sum(4, 6).unwrap() >= 22);
    }

    #[test]
    fn block_sum_inequality() {
        let f = gf(7);
        let mut rng = seeded_rng(50);
        for _ in 0..20 {
            let n = rng.gen_range(2..=3);
            let k = rng.gen_range(1..n * n);
            let base = WitnessSubspace::new(n, random_space(&f, &mut rng, n * n, k), "r").unwrap();
            let m = rng.gen_range(1..=3);
            let layout = BlockLayout::new((0..m).map(|_| rng.gen_range(1..=n)).collect()).unwrap();
            let s = block_sum(&base, &layout).unwrap();
            let total: usize = s.block_dims.iter().flatten().sum();
            assert_eq!(s.witness.dim(), total);
            assert_eq!(s.witness.n, layout.sizes().iter().sum::<usize>());
            for q in [3, 4] {
                let lhs = eq_dim(&s.witness.space, s.witness.n, q, CAP).unwrap();
                let rhs = eq_dim(&base.space, n, q, CAP).unwrap();
                assert!(lhs <= pow(m, q) * rhs);
            }
        }
    }

    #[test]
    fn inflation() {
        let f = Rationals;
        let cor = builtin_witness(&f, Construction::Cor341).unwrap();
        let w = inflate(&cor, 2, 4, CAP).unwrap();
        assert_eq!((w.n, w.d(), w.dim()), (6, 16, 20));
        assert_eq!(inflate(&cor, 1, 4, CAP).unwrap(), cor);
        let cor31 = builtin_witness(&f, Construction::Cor331).unwrap();
        let w = inflate(&cor31, 2, 5, CAP).unwrap();
        assert_eq!((w.n, w.d()), (6, 12));
        // inflating a non-vanishing subspace is caught
        let full = WitnessSubspace::new(2, RowSpace::full(&f, 4), "full").unwrap();
        assert!(matches!(inflate(&full, 2, 3, CAP), Err(TensorError::VerificationFailed { .. })));
    }

    #[test]
    fn gfield_family() {
        let f = Rationals;
        for n in 3..=9usize {
            let w = builtin_witness(&f, Construction::Gfield(n)).unwrap();
            let k = n / 3;
            let expected_dim = match n % 3 {
                0 => 5 * k * k,
                2 => 5 * k * k + 6 * k + 2,
                _ => 5 * k * k + 2 * k + 1,
            };
            assert_eq!(w.dim(), expected_dim, "n = {n}");
            assert_eq!(eq_dim(&w.space, n, 4, CAP).unwrap(), 0, "n = {n}");
        }
    }

    #[test]
    fn alp4_examples() {
        assert!(alp4_check(3, 2, FieldSpec::Rational, 0, CAP).unwrap());
        assert!(alp4_check(4, 3, FieldSpec::Prime(DEFAULT_PRIME), 0, CAP).unwrap());
        assert!(matches!(alp4_check(3, 1, FieldSpec::Rational, 0, CAP), Err(TensorError::Alp4Hypothesis(_))));
        let (l0, m) = alp4_pair(&Rationals, 3, 2).unwrap();
        assert_eq!((l0.dim(), m.dim()), (6, 5));
    }

    #[test]
    fn transfer_certificate_for_g30() {
        let g = builtin_witness(&Rationals, Construction::G30).unwrap();
        let cert = certify_vanishing_rational(&g, 4, DEFAULT_PRIME, CAP).unwrap();
        assert!(cert.holds(), "{cert}");
        assert_eq!((cert.n, cert.d), (7, 19));
    }

    #[test]
    fn witness_text_round_trip() {
        let f = Rationals;
        let mut w = builtin_witness(&f, Construction::Cor331).unwrap();
        w.seed = Some(9);
        let text = w.to_text();
        assert!(text.starts_with("n 3; construction cor3-31; seed 9\nambient 9; field rational\n"));
        assert_eq!(witness_field(&text).unwrap(), FieldSpec::Rational);
        assert_eq!(WitnessSubspace::from_text(&f, &text).unwrap(), w);
    }

    #[test]
    fn construction_names() {
        for s in ["cor3-41", "cor3-31", "g30", "alp4(3,2)", "gfield(5)", "whatnot1(7)"] {
            assert_eq!(s.parse::<Construction>().unwrap().to_string(), s);
        }
        assert_eq!(Construction::parse_with("gfield", Some(5), None).unwrap(), Construction::Gfield(5));
        assert!("nope".parse::<Construction>().is_err());
    }
}
