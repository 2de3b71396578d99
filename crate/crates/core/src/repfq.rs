//! Representations of acyclic, trivially valued quivers over a prime field.
//!
//! Everything is brute force: isomorphism classes are orbits of
//! `Π GL_{m_i}(F_q)` on the full space of matrix tuples, subrepresentations
//! are found by walking subspace tuples in topological order.
//!
//! A tuple of arrow matrices is indexed by reading its entries (arrow by
//! arrow, row-major) as base-`q` digits, most significant first. The
//! canonical representative of a class is its smallest index, which is the
//! lexicographically least tuple.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::cartan::ValuedQuiver;
use crate::exactring::is_prime;

pub const DEFAULT_BOUND: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("field order {0} is not prime")]
    NotPrime(i64),
    #[error("representations need a trivially valued quiver")]
    Valued,
    #[error("representations need an acyclic quiver")]
    Cyclic,
    #[error("total dimension {total} exceeds the bound {bound}")]
    BoundExceeded { total: usize, bound: usize },
    #[error("dimension vector has {got} entries, expected {expected}")]
    VertexCount { expected: usize, got: usize },
    #[error("arrow {arrow}: expected a {rows}x{cols} matrix")]
    Shape { arrow: usize, rows: usize, cols: usize },
    #[error("class index {index} out of range for dimension vector {dims:?}")]
    NoSuchClass { dims: Vec<usize>, index: usize },
}

fn inv_mod(a: u32, q: u32) -> u32 {
    let mut result = 1u64;
    let mut base = u64::from(a % q);
    let mut e = q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % u64::from(q);
        }
        base = base * base % u64::from(q);
        e >>= 1;
    }
    result as u32
}

fn primitive_root(q: u32) -> u32 {
    (1..q)
        .find(|&g| {
            let mut x = 1u32;
            (1..q - 1).all(|_| {
                x = x * g % q;
                x != 1
            })
        })
        .unwrap_or(1)
}

/// A matrix over `F_q` with entries in `0..q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Entries are reduced modulo `q`.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize, q: u32) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m.data[i * cols + j] = x.rem_euclid(i64::from(q)) as u32;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn mul(&self, rhs: &FqMatrix, q: u32) -> FqMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = FqMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let x = (out.get(i, j) + a * rhs.get(k, j)) % q;
                    out.set(i, j, x);
                }
            }
        }
        out
    }

    /// Image of a column vector.
    pub fn apply(&self, x: &[u32], q: u32) -> Vec<u32> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum::<u32>() % q)
            .collect()
    }

    pub fn rank(&self, q: u32) -> usize {
        let rows: Vec<Vec<u32>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        Subspace::span(rows, self.cols, q).dim()
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            f.write_str(&row.join(" "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} {self}", self.rows, self.cols)
    }
}

/// A subspace of `F_q^n` held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row-reduces the span of `vectors`.
    pub fn span(mut vectors: Vec<Vec<u32>>, ambient: usize, q: u32) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ambient {
            let Some(found) = (r..vectors.len()).find(|&i| vectors[i][col] != 0) else {
                continue;
            };
            vectors.swap(r, found);
            let inv = inv_mod(vectors[r][col], q);
            for x in vectors[r].iter_mut() {
                *x = *x * inv % q;
            }
            for i in 0..vectors.len() {
                if i != r && vectors[i][col] != 0 {
                    let c = vectors[i][col];
                    for k in 0..ambient {
                        vectors[i][k] = (vectors[i][k] + (q - c) * vectors[r][k]) % q;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        vectors.truncate(r);
        Self {
            ambient,
            rows: vectors,
            pivots,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that carry no pivot; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Reduces `x` modulo the subspace in place.
    pub fn reduce(&self, x: &mut [u32], q: u32) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = x[p];
            if c != 0 {
                for k in 0..self.ambient {
                    x[k] = (x[k] + (q - c) * row[k]) % q;
                }
            }
        }
    }

    pub fn contains(&self, x: &[u32], q: u32) -> bool {
        let mut y = x.to_vec();
        self.reduce(&mut y, q);
        y.iter().all(|&c| c == 0)
    }

    /// Coordinates of a member in the echelon basis.
    pub fn coordinates(&self, x: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&p| x[p]).collect()
    }

    /// Coordinates of `x + U` in the complement basis of [`Subspace::free_columns`].
    pub fn quotient_coordinates(&self, x: &[u32], q: u32) -> Vec<u32> {
        let mut y = x.to_vec();
        self.reduce(&mut y, q);
        self.free_columns().into_iter().map(|c| y[c]).collect()
    }

    /// Every subspace of `F_q^n`, by dimension and then pivot pattern.
    pub fn enumerate_all(n: usize, q: u32) -> Vec<Subspace> {
        let mut out = Vec::new();
        for k in 0..=n {
            for pivots in combinations(n, k) {
                let free: Vec<(usize, usize)> = (0..k)
                    .flat_map(|r| {
                        let p = &pivots;
                        (p[r] + 1..n).filter(move |c| !p.contains(c)).map(move |c| (r, c))
                    })
                    .collect();
                let count = (q as usize).pow(free.len() as u32);
                for mut code in 0..count {
                    let mut rows = vec![vec![0u32; n]; k];
                    for (r, &p) in pivots.iter().enumerate() {
                        rows[r][p] = 1;
                    }
                    for &(r, c) in &free {
                        rows[r][c] = (code % q as usize) as u32;
                        code /= q as usize;
                    }
                    out.push(Subspace {
                        ambient: n,
                        rows,
                        pivots: pivots.clone(),
                    });
                }
            }
        }
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Basis of the null space of the matrix whose rows are `equations`.
fn kernel_basis(equations: Vec<Vec<u32>>, ncols: usize, q: u32) -> Vec<Vec<u32>> {
    let s = Subspace::span(equations, ncols, q);
    s.free_columns()
        .into_iter()
        .map(|f| {
            let mut v = vec![0u32; ncols];
            v[f] = 1;
            for (row, &p) in s.rows.iter().zip(&s.pivots) {
                v[p] = (q - row[f]) % q;
            }
            v
        })
        .collect()
}

/// A representation: one vector space dimension per vertex and one matrix
/// per arrow (in the order of [`ValuedQuiver::arrows`]), of shape
/// `target dim x source dim`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqRep {
    dims: Vec<usize>,
    maps: Vec<FqMatrix>,
}

impl FqRep {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[FqMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }
}

impl fmt::Display for FqRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        write!(f, "({})", dims.join(","))?;
        for m in &self.maps {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FqRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqRep{self}")
    }
}

/// An isomorphism class: its dimension vector and its index in the table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClassId {
    pub dims: Vec<usize>,
    pub index: usize,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(usize::to_string).collect();
        write!(f, "[{}]#{}", dims.join(","), self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub representative: FqRep,
    pub orbit_size: u64,
    /// `|Aut|`, from orbit-stabilizer.
    pub aut: u128,
}

/// The isomorphism classes of one dimension vector.
#[derive(Clone, Debug)]
pub struct IsoClassTable {
    dims: Vec<usize>,
    q: u32,
    classes: Vec<IsoClass>,
    class_of: Vec<u32>,
    group_order: u128,
}

impl IsoClassTable {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn classes(&self) -> &[IsoClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of matrix tuples.
    pub fn total(&self) -> u64 {
        self.class_of.len() as u64
    }

    /// `Π |GL_{m_i}(F_q)|`.
    pub fn group_order(&self) -> u128 {
        self.group_order
    }

    pub fn ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        (0..self.classes.len()).map(|index| ClassId {
            dims: self.dims.clone(),
            index,
        })
    }
}

pub fn gl_order(m: usize, q: u32) -> u128 {
    let qm = u128::from(q).pow(m as u32);
    (0..m).map(|k| qm - u128::from(q).pow(k as u32)).product()
}

/// Counts of subrepresentations `U ⊆ L` keyed by `(class of U, class of L/U)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    pub entries: BTreeMap<(ClassId, ClassId), u64>,
}

impl Census {
    pub fn count(&self, sub: &ClassId, quotient: &ClassId) -> u64 {
        self.entries
            .get(&(sub.clone(), quotient.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// `|Gr_e L|`.
    pub fn grassmannian(&self, e: &[usize]) -> u64 {
        self.entries
            .iter()
            .filter(|((sub, _), _)| sub.dims == e)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }
}

type Cache<K, V> = Mutex<HashMap<K, Arc<V>>>;

/// Quiver, field and caches shared by all representation computations.
pub struct RepContext {
    quiver: ValuedQuiver,
    q: u32,
    arrows: Vec<(usize, usize)>,
    order: Vec<usize>,
    bound: usize,
    tables: Cache<Vec<usize>, IsoClassTable>,
    censuses: Cache<ClassId, Census>,
    subspaces: Cache<usize, Vec<Subspace>>,
}

impl fmt::Debug for RepContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepContext")
            .field("n", &self.quiver.n())
            .field("arrows", &self.arrows)
            .field("q", &self.q)
            .field("bound", &self.bound)
            .finish()
    }
}

impl RepContext {
    pub fn new(quiver: &ValuedQuiver, q: i64) -> Result<Self, RepError> {
        if !is_prime(q) || q > 251 {
            return Err(RepError::NotPrime(q));
        }
        if !quiver.is_trivially_valued() {
            return Err(RepError::Valued);
        }
        let order = quiver.topological_order().ok_or(RepError::Cyclic)?;
        Ok(Self {
            quiver: quiver.clone(),
            q: q as u32,
            arrows: quiver.arrows(),
            order,
            bound: DEFAULT_BOUND,
            tables: Mutex::default(),
            censuses: Mutex::default(),
            subspaces: Mutex::default(),
        })
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn quiver(&self) -> &ValuedQuiver {
        &self.quiver
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    fn check_dims(&self, dims: &[usize]) -> Result<(), RepError> {
        if dims.len() != self.n() {
            return Err(RepError::VertexCount {
                expected: self.n(),
                got: dims.len(),
            });
        }
        let total: usize = dims.iter().sum();
        if total > self.bound {
            return Err(RepError::BoundExceeded {
                total,
                bound: self.bound,
            });
        }
        Ok(())
    }

    /// Builds a representation, checking matrix shapes.
    pub fn rep(&self, dims: Vec<usize>, maps: Vec<FqMatrix>) -> Result<FqRep, RepError> {
        if dims.len() != self.n() {
            return Err(RepError::VertexCount {
                expected: self.n(),
                got: dims.len(),
            });
        }
        if maps.len() != self.arrows.len() {
            return Err(RepError::VertexCount {
                expected: self.arrows.len(),
                got: maps.len(),
            });
        }
        for (a, (&(s, t), m)) in self.arrows.iter().zip(&maps).enumerate() {
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(RepError::Shape {
                    arrow: a,
                    rows: dims[t],
                    cols: dims[s],
                });
            }
        }
        Ok(FqRep { dims, maps })
    }

    /// The representation with every arrow acting by zero.
    pub fn semisimple(&self, dims: &[usize]) -> FqRep {
        FqRep {
            dims: dims.to_vec(),
            maps: self
                .arrows
                .iter()
                .map(|&(s, t)| FqMatrix::zeros(dims[t], dims[s]))
                .collect(),
        }
    }

    /// The simple representation at vertex `i` (0-based).
    pub fn simple(&self, i: usize) -> FqRep {
        let mut dims = vec![0; self.n()];
        dims[i] = 1;
        self.semisimple(&dims)
    }

    pub fn direct_sum(&self, a: &FqRep, b: &FqRep) -> FqRep {
        let dims: Vec<usize> = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| {
                let mut m = FqMatrix::zeros(dims[t], dims[s]);
                let (ma, mb) = (&a.maps[k], &b.maps[k]);
                for i in 0..ma.rows() {
                    for j in 0..ma.cols() {
                        m.set(i, j, ma.get(i, j));
                    }
                }
                for i in 0..mb.rows() {
                    for j in 0..mb.cols() {
                        m.set(a.dims[t] + i, a.dims[s] + j, mb.get(i, j));
                    }
                }
                m
            })
            .collect();
        FqRep { dims, maps }
    }

    fn tuple_len(&self, dims: &[usize]) -> usize {
        self.arrows.iter().map(|&(s, t)| dims[s] * dims[t]).sum()
    }

    fn encode(&self, rep: &FqRep) -> usize {
        rep.maps
            .iter()
            .flat_map(|m| m.entries())
            .fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    fn decode(&self, dims: &[usize], mut index: usize) -> FqRep {
        let len = self.tuple_len(dims);
        let mut digits = vec![0u32; len];
        for slot in digits.iter_mut().rev() {
            *slot = (index % self.q as usize) as u32;
            index /= self.q as usize;
        }
        let mut offset = 0;
        let maps = self
            .arrows
            .iter()
            .map(|&(s, t)| {
                let size = dims[s] * dims[t];
                let m = FqMatrix {
                    rows: dims[t],
                    cols: dims[s],
                    data: digits[offset..offset + size].to_vec(),
                };
                offset += size;
                m
            })
            .collect();
        FqRep {
            dims: dims.to_vec(),
            maps,
        }
    }

    /// Generators of `GL_m(F_q)`: elementary transvections and one scaling.
    fn gl_generators(&self, m: usize) -> Vec<(FqMatrix, FqMatrix)> {
        let q = self.q;
        let mut gens = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b {
                    let mut g = FqMatrix::identity(m);
                    g.set(a, b, 1);
                    let mut g_inv = FqMatrix::identity(m);
                    g_inv.set(a, b, q - 1);
                    gens.push((g, g_inv));
                }
            }
        }
        if q > 2 && m > 0 {
            let root = primitive_root(q);
            let mut g = FqMatrix::identity(m);
            g.set(0, 0, root);
            let mut g_inv = FqMatrix::identity(m);
            g_inv.set(0, 0, inv_mod(root, q));
            gens.push((g, g_inv));
        }
        gens
    }

    fn act(&self, rep: &FqRep, vertex: usize, g: &FqMatrix, g_inv: &FqMatrix) -> FqRep {
        let maps = self
            .arrows
            .iter()
            .zip(&rep.maps)
            .map(|(&(s, t), m)| {
                let mut out = m.clone();
                if t == vertex {
                    out = g.mul(&out, self.q);
                }
                if s == vertex {
                    out = out.mul(g_inv, self.q);
                }
                out
            })
            .collect();
        FqRep {
            dims: rep.dims.clone(),
            maps,
        }
    }

    fn build_table(&self, dims: &[usize]) -> IsoClassTable {
        let q = self.q;
        let total = (q as usize).pow(self.tuple_len(dims) as u32);
        let mut parent: Vec<u32> = (0..total as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                let up = parent[parent[x as usize] as usize];
                parent[x as usize] = up;
                x = up;
            }
            x
        }
        let generators: Vec<(usize, FqMatrix, FqMatrix)> = (0..self.n())
            .flat_map(|v| {
                self.gl_generators(dims[v])
                    .into_iter()
                    .map(move |(g, gi)| (v, g, gi))
            })
            .collect();
        for index in 0..total {
            let rep = self.decode(dims, index);
            for (v, g, gi) in &generators {
                let image = self.encode(&self.act(&rep, *v, g, gi));
                let (a, b) = (find(&mut parent, index as u32), find(&mut parent, image as u32));
                if a < b {
                    parent[b as usize] = a;
                } else if b < a {
                    parent[a as usize] = b;
                }
            }
        }
        let group_order: u128 = dims.iter().map(|&m| gl_order(m, q)).product();
        let mut class_of = vec![0u32; total];
        let mut root_class: HashMap<u32, u32> = HashMap::new();
        let mut classes: Vec<IsoClass> = Vec::new();
        for index in 0..total {
            let root = find(&mut parent, index as u32);
            let class = *root_class.entry(root).or_insert_with(|| {
                classes.push(IsoClass {
                    representative: self.decode(dims, root as usize),
                    orbit_size: 0,
                    aut: 0,
                });
                (classes.len() - 1) as u32
            });
            class_of[index] = class;
            classes[class as usize].orbit_size += 1;
        }
        for c in &mut classes {
            c.aut = group_order / u128::from(c.orbit_size);
        }
        IsoClassTable {
            dims: dims.to_vec(),
            q,
            classes,
            class_of,
            group_order,
        }
    }

    /// The isomorphism classes of dimension vector `dims`, cached.
    pub fn table(&self, dims: &[usize]) -> Result<Arc<IsoClassTable>, RepError> {
        self.check_dims(dims)?;
        if let Some(t) = self.tables.lock().expect("table cache").get(dims) {
            return Ok(Arc::clone(t));
        }
        let built = Arc::new(self.build_table(dims));
        let mut cache = self.tables.lock().expect("table cache");
        Ok(Arc::clone(cache.entry(dims.to_vec()).or_insert(built)))
    }

    pub fn iso_class_of(&self, rep: &FqRep) -> Result<ClassId, RepError> {
        let rep = self.rep(rep.dims.clone(), rep.maps.clone())?;
        let table = self.table(&rep.dims)?;
        Ok(ClassId {
            dims: rep.dims.clone(),
            index: table.class_of[self.encode(&rep)] as usize,
        })
    }

    pub fn class(&self, id: &ClassId) -> Result<IsoClass, RepError> {
        let table = self.table(&id.dims)?;
        table
            .classes
            .get(id.index)
            .cloned()
            .ok_or_else(|| RepError::NoSuchClass {
                dims: id.dims.clone(),
                index: id.index,
            })
    }

    pub fn representative(&self, id: &ClassId) -> Result<FqRep, RepError> {
        Ok(self.class(id)?.representative)
    }

    /// `|Aut|` of a class via orbit-stabilizer.
    pub fn aut(&self, id: &ClassId) -> Result<u128, RepError> {
        Ok(self.class(id)?.aut)
    }

    /// All dimension vectors of total dimension exactly `total`.
    pub fn dim_vectors(&self, total: usize) -> Vec<Vec<usize>> {
        fn go(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for x in (0..=left).rev() {
                cur.push(x);
                go(n, left - x, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(self.n(), total, &mut Vec::new(), &mut out);
        out
    }

    /// Every class with total dimension at most `total`.
    pub fn classes_up_to(&self, total: usize) -> Result<Vec<ClassId>, RepError> {
        let mut out = Vec::new();
        for t in 0..=total {
            for dims in self.dim_vectors(t) {
                out.extend(self.table(&dims)?.ids());
            }
        }
        Ok(out)
    }

    /// Matrix of `δ(f)_a = N_a f_s - f_t M_a` from `⊕ Hom(M_i, N_i)` to
    /// `⊕_a Hom(M_s, N_t)`, as a list of rows (one per target coordinate).
    fn delta(&self, m: &FqRep, n: &FqRep) -> (Vec<Vec<u32>>, usize) {
        let q = self.q;
        let mut var_offset = vec![0usize; self.n()];
        let mut nvars = 0;
        for i in 0..self.n() {
            var_offset[i] = nvars;
            nvars += n.dims[i] * m.dims[i];
        }
        let var = |i: usize, r: usize, c: usize| var_offset[i] + r * m.dims[i] + c;
        let mut rows = Vec::new();
        for (k, &(s, t)) in self.arrows.iter().enumerate() {
            let (ma, na) = (&m.maps[k], &n.maps[k]);
            for r in 0..n.dims[t] {
                for c in 0..m.dims[s] {
                    let mut eq = vec![0u32; nvars];
                    for x in 0..n.dims[s] {
                        let idx = var(s, x, c);
                        eq[idx] = (eq[idx] + na.get(r, x)) % q;
                    }
                    for x in 0..m.dims[t] {
                        let idx = var(t, r, x);
                        eq[idx] = (eq[idx] + q - ma.get(x, c)) % q;
                    }
                    rows.push(eq);
                }
            }
        }
        (rows, nvars)
    }

    fn check_pair(&self, m: &FqRep, n: &FqRep) -> Result<(), RepError> {
        self.rep(m.dims.clone(), m.maps.clone())?;
        self.rep(n.dims.clone(), n.maps.clone())?;
        Ok(())
    }

    pub fn hom_dim(&self, m: &FqRep, n: &FqRep) -> Result<usize, RepError> {
        self.check_pair(m, n)?;
        let (rows, nvars) = self.delta(m, n);
        Ok(nvars - Subspace::span(rows, nvars, self.q).dim())
    }

    /// `hom_dim - <m, n>`.
    pub fn ext_dim(&self, m: &FqRep, n: &FqRep) -> Result<usize, RepError> {
        let hom = self.hom_dim(m, n)? as i64;
        let euler = self.quiver.euler(&m.dim_vector(), &n.dim_vector());
        Ok((hom - euler) as usize)
    }

    /// Cokernel dimension of `δ`, without using the Euler form.
    pub fn ext_dim_direct(&self, m: &FqRep, n: &FqRep) -> Result<usize, RepError> {
        self.check_pair(m, n)?;
        let (rows, nvars) = self.delta(m, n);
        let codomain = rows.len();
        Ok(codomain - Subspace::span(rows, nvars, self.q).dim())
    }

    /// `|Aut(M)|` by enumerating invertible elements of `End(M)`. Returns
    /// `None` when `End(M)` has more than `2^20` elements.
    pub fn aut_order_enumerated(&self, m: &FqRep) -> Result<Option<u64>, RepError> {
        self.check_pair(m, m)?;
        let q = self.q;
        let (rows, nvars) = self.delta(m, m);
        let basis = kernel_basis(rows, nvars, q);
        let size = (q as u64).checked_pow(basis.len() as u32).filter(|&s| s <= 1 << 20);
        let Some(size) = size else { return Ok(None) };
        let mut count = 0;
        for mut code in 0..size {
            let mut f = vec![0u32; nvars];
            for b in &basis {
                let c = (code % q as u64) as u32;
                code /= q as u64;
                for (x, y) in f.iter_mut().zip(b) {
                    *x = (*x + c * y) % q;
                }
            }
            let mut offset = 0;
            let invertible = m.dims.iter().all(|&d| {
                let block = FqMatrix {
                    rows: d,
                    cols: d,
                    data: f[offset..offset + d * d].to_vec(),
                };
                offset += d * d;
                block.rank(q) == d
            });
            if invertible {
                count += 1;
            }
        }
        Ok(Some(count))
    }

    /// `|Aut(M)|` from the class table.
    pub fn aut_order(&self, m: &FqRep) -> Result<u128, RepError> {
        self.aut(&self.iso_class_of(m)?)
    }

    fn subspaces(&self, n: usize) -> Arc<Vec<Subspace>> {
        if let Some(s) = self.subspaces.lock().expect("subspace cache").get(&n) {
            return Arc::clone(s);
        }
        let built = Arc::new(Subspace::enumerate_all(n, self.q));
        let mut cache = self.subspaces.lock().expect("subspace cache");
        Arc::clone(cache.entry(n).or_insert(built))
    }

    /// All arrow-closed subspace tuples of `l`, indexed by vertex.
    pub fn subrepresentations(&self, l: &FqRep) -> Vec<Vec<Subspace>> {
        let q = self.q;
        let mut out = Vec::new();
        let mut chosen: Vec<Option<Subspace>> = vec![None; self.n()];
        fn walk(
            ctx: &RepContext,
            l: &FqRep,
            depth: usize,
            chosen: &mut Vec<Option<Subspace>>,
            out: &mut Vec<Vec<Subspace>>,
            q: u32,
        ) {
            if depth == ctx.order.len() {
                out.push(chosen.iter().map(|s| s.clone().expect("filled")).collect());
                return;
            }
            let v = ctx.order[depth];
            for candidate in ctx.subspaces(l.dims[v]).iter() {
                let closed = ctx.arrows.iter().zip(&l.maps).all(|(&(s, t), m)| {
                    t != v
                        || chosen[s]
                            .as_ref()
                            .expect("sources precede targets")
                            .basis()
                            .iter()
                            .all(|u| candidate.contains(&m.apply(u, q), q))
                });
                if closed {
                    chosen[v] = Some(candidate.clone());
                    walk(ctx, l, depth + 1, chosen, out, q);
                    chosen[v] = None;
                }
            }
        }
        walk(self, l, 0, &mut chosen, &mut out, q);
        out
    }

    /// The subrepresentation `U` and quotient `L/U` in the bases fixed by
    /// the echelon forms of `u`.
    pub fn sub_and_quotient(&self, l: &FqRep, u: &[Subspace]) -> (FqRep, FqRep) {
        let q = self.q;
        let sub_dims: Vec<usize> = u.iter().map(Subspace::dim).collect();
        let quot_dims: Vec<usize> = l.dims.iter().zip(&sub_dims).map(|(a, b)| a - b).collect();
        let mut sub_maps = Vec::new();
        let mut quot_maps = Vec::new();
        for (&(s, t), m) in self.arrows.iter().zip(&l.maps) {
            let mut sm = FqMatrix::zeros(sub_dims[t], sub_dims[s]);
            for (c, b) in u[s].basis().iter().enumerate() {
                for (r, x) in u[t].coordinates(&m.apply(b, q)).into_iter().enumerate() {
                    sm.set(r, c, x);
                }
            }
            let mut qm = FqMatrix::zeros(quot_dims[t], quot_dims[s]);
            for (c, col) in u[s].free_columns().into_iter().enumerate() {
                let mut e = vec![0u32; l.dims[s]];
                e[col] = 1;
                let image = m.apply(&e, q);
                for (r, x) in u[t].quotient_coordinates(&image, q).into_iter().enumerate() {
                    qm.set(r, c, x);
                }
            }
            sub_maps.push(sm);
            quot_maps.push(qm);
        }
        (
            FqRep {
                dims: sub_dims,
                maps: sub_maps,
            },
            FqRep {
                dims: quot_dims,
                maps: quot_maps,
            },
        )
    }

    /// Census of `(U, L/U)` classes over all subrepresentations of `l`.
    pub fn subobject_census(&self, l: &FqRep) -> Result<Census, RepError> {
        self.rep(l.dims.clone(), l.maps.clone())?;
        self.check_dims(&l.dims)?;
        let mut census = Census::default();
        for u in self.subrepresentations(l) {
            let (sub, quot) = self.sub_and_quotient(l, &u);
            let key = (self.iso_class_of(&sub)?, self.iso_class_of(&quot)?);
            *census.entries.entry(key).or_insert(0) += 1;
        }
        Ok(census)
    }

    /// Cached census of a class representative.
    pub fn census(&self, id: &ClassId) -> Result<Arc<Census>, RepError> {
        if let Some(c) = self.censuses.lock().expect("census cache").get(id) {
            return Ok(Arc::clone(c));
        }
        let built = Arc::new(self.subobject_census(&self.representative(id)?)?);
        let mut cache = self.censuses.lock().expect("census cache");
        Ok(Arc::clone(cache.entry(id.clone()).or_insert(built)))
    }

    pub fn grassmannian_count(&self, l: &FqRep, e: &[usize]) -> Result<u64, RepError> {
        Ok(self.census(&self.iso_class_of(l)?)?.grassmannian(e))
    }

    /// Representatives of `Ext^1(M, N)`: one cocycle `(h_a)` per cokernel
    /// element of `δ`.
    pub fn ext_cocycles(&self, m: &FqRep, n: &FqRep) -> Result<Vec<Vec<FqMatrix>>, RepError> {
        self.check_pair(m, n)?;
        let q = self.q;
        let (rows, nvars) = self.delta(m, n);
        let codomain = rows.len();
        let columns: Vec<Vec<u32>> = (0..nvars).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let image = Subspace::span(columns, codomain, q);
        let free = image.free_columns();
        let count = (q as usize).pow(free.len() as u32);
        let mut out = Vec::with_capacity(count);
        for mut code in 0..count {
            let mut flat = vec![0u32; codomain];
            for &c in &free {
                flat[c] = (code % q as usize) as u32;
                code /= q as usize;
            }
            let mut offset = 0;
            let h = self
                .arrows
                .iter()
                .map(|&(s, t)| {
                    let size = n.dims[t] * m.dims[s];
                    let mat = FqMatrix {
                        rows: n.dims[t],
                        cols: m.dims[s],
                        data: flat[offset..offset + size].to_vec(),
                    };
                    offset += size;
                    mat
                })
                .collect();
            out.push(h);
        }
        Ok(out)
    }

    /// The middle term `L_a = (N_a, h_a; 0, M_a)` of the extension of `M` by
    /// `N` given by the cocycle `h`.
    pub fn extension(&self, m: &FqRep, n: &FqRep, h: &[FqMatrix]) -> FqRep {
        let dims: Vec<usize> = n.dims.iter().zip(&m.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| {
                let mut l = FqMatrix::zeros(dims[t], dims[s]);
                for i in 0..n.dims[t] {
                    for j in 0..n.dims[s] {
                        l.set(i, j, n.maps[k].get(i, j));
                    }
                    for j in 0..m.dims[s] {
                        l.set(i, n.dims[s] + j, h[k].get(i, j));
                    }
                }
                for i in 0..m.dims[t] {
                    for j in 0..m.dims[s] {
                        l.set(n.dims[t] + i, n.dims[s] + j, m.maps[k].get(i, j));
                    }
                }
                l
            })
            .collect();
        FqRep { dims, maps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(q: i64) -> RepContext {
        RepContext::new(&ValuedQuiver::from_arrows(2, &[(0, 1, 1)]).unwrap(), q).unwrap()
    }

    fn p1(ctx: &RepContext) -> FqRep {
        ctx.rep(vec![1, 1], vec![FqMatrix::from_rows(&[vec![1]], 1, ctx.q())]).unwrap()
    }

    #[test]
    fn subspace_counts() {
        // Gaussian binomials at q = 2 and q = 3
        assert_eq!(Subspace::enumerate_all(3, 2).len(), 1 + 7 + 7 + 1);
        assert_eq!(Subspace::enumerate_all(4, 3).len(), 1 + 40 + 130 + 40 + 1);
    }

    #[test]
    fn a2_tables() {
        let ctx = a2(2);
        assert_eq!(ctx.table(&[1, 0]).unwrap().len(), 1);
        let t = ctx.table(&[1, 1]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.classes()[0].representative, ctx.semisimple(&[1, 1]));
        assert_eq!(t.classes()[1].representative, p1(&ctx));

        let ctx3 = a2(3);
        let t = ctx3.table(&[1, 1]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!((t.classes()[1].orbit_size, t.classes()[1].aut), (2, 2));
    }

    #[test]
    fn class_lookup() {
        let ctx = a2(2);
        assert_eq!(ctx.iso_class_of(&p1(&ctx)).unwrap().index, 1);
        let m = ctx.rep(vec![2, 1], vec![FqMatrix::from_rows(&[vec![1, 0]], 2, 2)]).unwrap();
        let expected = ctx.direct_sum(&p1(&ctx), &ctx.simple(0));
        assert_eq!(ctx.iso_class_of(&m).unwrap(), ctx.iso_class_of(&expected).unwrap());
        assert!(ctx.iso_class_of(&ctx.simple(0)).is_ok());
        assert!(ctx.table(&[3, 3]).is_err());
    }

    #[test]
    fn hom_and_ext() {
        let ctx = a2(2);
        let (s1, s2) = (ctx.simple(0), ctx.simple(1));
        assert_eq!(ctx.hom_dim(&s1, &s1).unwrap(), 1);
        assert_eq!(ctx.hom_dim(&s1, &s2).unwrap(), 0);
        assert_eq!(ctx.ext_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(ctx.ext_dim_direct(&s1, &s2).unwrap(), 1);
        assert_eq!(ctx.hom_dim(&p1(&ctx), &s2).unwrap(), 0);
        assert_eq!(ctx.hom_dim(&s2, &p1(&ctx)).unwrap(), 1);
        assert_eq!(ctx.hom_dim(&p1(&ctx), &s1).unwrap(), 1);
    }

    #[test]
    fn automorphisms() {
        let ctx = a2(2);
        let s1 = ctx.simple(0);
        assert_eq!(ctx.aut_order_enumerated(&s1).unwrap(), Some(1));
        let s11 = ctx.direct_sum(&s1, &s1);
        assert_eq!(ctx.aut_order_enumerated(&s11).unwrap(), Some(6));
        assert_eq!(ctx.aut_order(&s11).unwrap(), 6);
        assert_eq!(ctx.aut_order_enumerated(&p1(&ctx)).unwrap(), Some(1));
    }

    #[test]
    fn grassmannians() {
        let ctx = a2(2);
        let p = p1(&ctx);
        for (e, c) in [([0, 0], 1), ([0, 1], 1), ([1, 1], 1), ([1, 0], 0)] {
            assert_eq!(ctx.grassmannian_count(&p, &e).unwrap(), c, "{e:?}");
        }
        let split = ctx.semisimple(&[1, 1]);
        assert_eq!(ctx.grassmannian_count(&split, &[1, 0]).unwrap(), 1);
        assert_eq!(ctx.subrepresentations(&split).len(), 4);
    }

    #[test]
    fn extension_middle_terms() {
        let ctx = a2(2);
        let (s1, s2) = (ctx.simple(0), ctx.simple(1));
        let cocycles = ctx.ext_cocycles(&s1, &s2).unwrap();
        assert_eq!(cocycles.len(), 2);
        let classes: Vec<ClassId> = cocycles
            .iter()
            .map(|h| ctx.iso_class_of(&ctx.extension(&s1, &s2, h)).unwrap())
            .collect();
        assert_eq!(classes[0].index, 0);
        assert_eq!(classes[1].index, 1);
    }
}
