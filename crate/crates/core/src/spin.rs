//! Angular-momentum coupling of spin-1/2 sites.
//!
//! A [`CouplingTree`] is a bracketing of chain sites with a total-spin label on
//! every internal node; a choice of bracketing is a choice of basis. Trees are
//! realized as concrete vectors in the `2ⁿ`-dimensional product space by
//! recursive Clebsch-Gordan coupling (Condon-Shortley phases, left child is
//! `j₁`), and recoupling matrices are overlaps between two such families.
//!
//! Product-space convention: bit `k` of a basis index is the spin of site `k`,
//! `0 = ↑`, `1 = ↓`.
//!
//! Trees can be written in a compact text form: a site index, or
//! `(left right)_label` where the label is an integer or `k/2`, e.g.
//! `((0 1)_1 2)_1/2`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::linalg::{CMatrix, ZERO};
use crate::{Error, Result};

/// Tolerance used when validating orthonormality of tree families.
pub const ORTHO_TOL: f64 = 1e-12;

/// An integer or half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);
    pub const THREE_HALVES: HalfInt = HalfInt(3);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn integer(n: i32) -> Self {
        HalfInt(2 * n)
    }

    /// Accept `x` only if `2x` is an integer (within 1e-9).
    pub fn from_f64(x: f64) -> Result<Self> {
        let t = 2.0 * x;
        let r = libm::round(t);
        if !t.is_finite() || (t - r).abs() > 1e-9 || r.abs() > i32::MAX as f64 {
            return Err(Error::NotHalfInteger(x));
        }
        Ok(HalfInt(r as i32))
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// All projections `−j, −j+1, …, j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j.max(-1)).map(move |k| HalfInt(-j + 2 * k))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl core::ops::Add for HalfInt {
    type Output = HalfInt;

    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl core::ops::Sub for HalfInt {
    type Output = HalfInt;

    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl core::ops::Neg for HalfInt {
    type Output = HalfInt;

    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

/// `|j₁ − j₂| ≤ J ≤ j₁ + j₂` with `j₁ + j₂ + J` integral.
pub fn triangle(j1: HalfInt, j2: HalfInt, j: HalfInt) -> bool {
    j1.0 >= 0
        && j2.0 >= 0
        && j.0 >= 0
        && j.0 >= (j1.0 - j2.0).abs()
        && j.0 <= j1.0 + j2.0
        && (j1.0 + j2.0 + j.0) % 2 == 0
}

fn valid_projection(j: HalfInt, m: HalfInt) -> bool {
    j.0 >= 0 && m.0.abs() <= j.0 && (j.0 - m.0) % 2 == 0
}

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `⟨j₁ m₁; j₂ m₂ | J M⟩` in the Condon-Shortley convention (Racah's formula).
///
/// Returns zero when `M ≠ m₁ + m₂`, the triangle rule fails, or a projection
/// is out of range.
pub fn cg(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    if m.0 != m1.0 + m2.0
        || !triangle(j1, j2, j)
        || !valid_projection(j1, m1)
        || !valid_projection(j2, m2)
        || !valid_projection(j, m)
    {
        return 0.0;
    }
    // All of these are integers once the checks above pass.
    let a = (j1.0 + j2.0 - j.0) / 2;
    let b = (j1.0 - m1.0) / 2;
    let c = (j2.0 + m2.0) / 2;
    let d = (j.0 - j2.0 + m1.0) / 2;
    let e = (j.0 - j1.0 - m2.0) / 2;
    let pre = (j.0 + 1) as f64
        * factorial((j.0 + j1.0 - j2.0) / 2)
        * factorial((j.0 - j1.0 + j2.0) / 2)
        * factorial(a)
        / factorial((j1.0 + j2.0 + j.0) / 2 + 1);
    let proj = factorial((j.0 + m.0) / 2)
        * factorial((j.0 - m.0) / 2)
        * factorial((j1.0 - m1.0) / 2)
        * factorial((j1.0 + m1.0) / 2)
        * factorial((j2.0 - m2.0) / 2)
        * factorial((j2.0 + m2.0) / 2);
    let kmin = 0.max(-d).max(-e);
    let kmax = a.min(b).min(c);
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign
            / (factorial(k)
                * factorial(a - k)
                * factorial(b - k)
                * factorial(c - k)
                * factorial(d + k)
                * factorial(e + k));
    }
    libm::sqrt(pre) * libm::sqrt(proj) * sum
}

/// Same as [`cg`] but takes real arguments and rejects non-half-integers.
pub fn cg_coefficient(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> Result<f64> {
    Ok(cg(
        HalfInt::from_f64(j1)?,
        HalfInt::from_f64(m1)?,
        HalfInt::from_f64(j2)?,
        HalfInt::from_f64(m2)?,
        HalfInt::from_f64(j)?,
        HalfInt::from_f64(m)?,
    ))
}

/// Unlabelled bracketing of sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Site(usize),
    Pair(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn pair(left: Shape, right: Shape) -> Shape {
        Shape::Pair(Box::new(left), Box::new(right))
    }

    pub fn sites(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_sites(&mut out);
        out
    }

    fn collect_sites(&self, out: &mut Vec<usize>) {
        match self {
            Shape::Site(s) => out.push(*s),
            Shape::Pair(l, r) => {
                l.collect_sites(out);
                r.collect_sites(out);
            }
        }
    }

    /// Every labelling of the internal nodes allowed by the triangle rule.
    pub fn labelings(&self) -> Vec<Node> {
        match self {
            Shape::Site(s) => vec![Node::Site(*s)],
            Shape::Pair(l, r) => {
                let mut out = Vec::new();
                for ln in l.labelings() {
                    for rn in r.labelings() {
                        let (j1, j2) = (ln.spin(), rn.spin());
                        let mut j = HalfInt((j1.0 - j2.0).abs());
                        while j.0 <= j1.0 + j2.0 {
                            out.push(Node::couple(ln.clone(), rn.clone(), j));
                            j.0 += 2;
                        }
                    }
                }
                out
            }
        }
    }

    /// Parse the unlabelled text form, e.g. `((0 1) 2)`.
    pub fn parse(text: &str) -> Result<Shape> {
        let node = Parser::new(text).parse_all(false)?;
        Ok(node.shape())
    }
}

/// A coupling-tree node: a site, or two children coupled to total spin `spin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Site(usize),
    Couple { left: Box<Node>, right: Box<Node>, spin: HalfInt },
}

impl Node {
    pub fn couple(left: Node, right: Node, spin: HalfInt) -> Node {
        Node::Couple { left: Box::new(left), right: Box::new(right), spin }
    }

    pub fn spin(&self) -> HalfInt {
        match self {
            Node::Site(_) => HalfInt::HALF,
            Node::Couple { spin, .. } => *spin,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Node::Site(s) => Shape::Site(*s),
            Node::Couple { left, right, .. } => Shape::pair(left.shape(), right.shape()),
        }
    }

    pub fn sites(&self) -> Vec<usize> {
        self.shape().sites()
    }

    fn check_triangles(&self) -> Result<()> {
        if let Node::Couple { left, right, spin } = self {
            left.check_triangles()?;
            right.check_triangles()?;
            if !triangle(left.spin(), right.spin(), *spin) {
                return Err(Error::Triangle(format!(
                    "cannot couple {} and {} to {}",
                    left.spin(),
                    right.spin(),
                    spin
                )));
            }
        }
        Ok(())
    }

    /// All `2j+1` projections of this node as product-space vectors, ordered
    /// by ascending `m`.
    fn multiplet(&self, n_sites: usize) -> Vec<Vec<f64>> {
        let dim = 1usize << n_sites;
        match self {
            Node::Site(s) => {
                let mut down = vec![0.0; dim];
                down[1 << s] = 1.0;
                let mut up = vec![0.0; dim];
                up[0] = 1.0;
                vec![down, up]
            }
            Node::Couple { left, right, spin } => {
                let (lm, rm) = (left.multiplet(n_sites), right.multiplet(n_sites));
                let (j1, j2) = (left.spin(), right.spin());
                spin.projections()
                    .map(|m| {
                        let mut out = vec![0.0; dim];
                        for (i1, m1) in j1.projections().enumerate() {
                            let m2 = m - m1;
                            if m2.0.abs() > j2.0 {
                                continue;
                            }
                            let i2 = ((m2.0 + j2.0) / 2) as usize;
                            let coeff = cg(j1, m1, j2, m2, *spin, m);
                            if coeff == 0.0 {
                                continue;
                            }
                            tensor_accumulate(&mut out, &lm[i1], &rm[i2], coeff);
                        }
                        out
                    })
                    .collect()
            }
        }
    }
}

/// `out += coeff · (a ⊗ b)` for vectors supported on disjoint site sets.
fn tensor_accumulate(out: &mut [f64], a: &[f64], b: &[f64], coeff: f64) {
    for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0.0) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| **y != 0.0) {
            out[i | j] += coeff * x * y;
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Site(s) => write!(f, "{s}"),
            Node::Couple { left, right, spin } => write!(f, "({left} {right})_{spin}"),
        }
    }
}

/// A fully labelled coupling tree over sites `0..n` with a chosen projection `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CouplingTree {
    root: Node,
    m: HalfInt,
}

impl CouplingTree {
    /// Validates the triangle rule, `|M| ≤ S`, `M ≡ S (mod 1)`, and that the
    /// leaves are exactly the sites `0..n`, each once.
    pub fn new(root: Node, m: HalfInt) -> Result<Self> {
        root.check_triangles()?;
        let s = root.spin();
        if !valid_projection(s, m) {
            return Err(Error::Triangle(format!("projection {m} is invalid for total spin {s}")));
        }
        let mut sites = root.sites();
        sites.sort_unstable();
        for (k, s) in sites.iter().enumerate() {
            if *s != k {
                return Err(Error::Site(format!(
                    "tree leaves must be the sites 0..{} each exactly once",
                    sites.len()
                )));
            }
        }
        if sites.len() > 16 {
            return Err(Error::Site("at most 16 sites are supported".into()));
        }
        Ok(Self { root, m })
    }

    /// Parse the labelled text form, e.g. `((0 1)_1 2)_1/2`.
    pub fn parse(text: &str, m: HalfInt) -> Result<Self> {
        let root = Parser::new(text).parse_all(true)?;
        Self::new(root, m)
    }

    /// Same tree at maximal projection `M = S`.
    pub fn parse_stretched(text: &str) -> Result<Self> {
        let root = Parser::new(text).parse_all(true)?;
        let s = root.spin();
        Self::new(root, s)
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn total_spin(&self) -> HalfInt {
        self.root.spin()
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    pub fn n_sites(&self) -> usize {
        self.root.sites().len()
    }

    pub fn with_m(&self, m: HalfInt) -> Result<Self> {
        Self::new(self.root.clone(), m)
    }
}

impl fmt::Display for CouplingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [M={}]", self.root, self.m)
    }
}

/// All trees of a given shape with total spin `s` and projection `m`.
pub fn sector_trees(shape: &Shape, s: HalfInt, m: HalfInt) -> Result<Vec<CouplingTree>> {
    shape
        .labelings()
        .into_iter()
        .filter(|n| n.spin() == s)
        .map(|n| CouplingTree::new(n, m))
        .collect()
}

/// A normalized product-space state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Normalizes the given amplitudes; fails on a zero vector.
    pub fn new(n_sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n_sites {
            return Err(Error::Domain(format!(
                "{} amplitudes for {} sites",
                amps.len(),
                n_sites
            )));
        }
        let norm = libm::sqrt(amps.iter().map(|a| a.norm_sqr()).sum());
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::Domain("zero state vector".into()));
        }
        Ok(Self { n_sites, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }
}

/// Realize a tree as a product-space vector.
pub fn build_state(tree: &CouplingTree) -> StateVector {
    let n = tree.n_sites();
    let j = tree.total_spin();
    let idx = ((tree.m.0 + j.0) / 2) as usize;
    let v = tree.root.multiplet(n).swap_remove(idx);
    let amps = v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    // Recursive CG coupling of normalized multiplets is already normalized.
    StateVector { n_sites: n, amps }
}

/// Largest deviation of the Gram matrix from the identity.
pub fn orthonormality_deviation(states: &[StateVector]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((a.inner(b) - Complex64::new(target, 0.0)).norm());
        }
    }
    dev
}

/// Orthogonal change of basis between two tree families spanning the same space.
///
/// `entry(i, j) = ⟨target_j | source_i⟩`, so row `i` expands source state `i`
/// in the target basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RecouplingMatrix {
    dim: usize,
    entries: Vec<f64>,
    source: Vec<CouplingTree>,
    target: Vec<CouplingTree>,
}

impl RecouplingMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn source(&self) -> &[CouplingTree] {
        &self.source
    }

    pub fn target(&self) -> &[CouplingTree] {
        &self.target
    }

    /// `‖FᵀF − 1‖_max`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| self.entry(k, i) * self.entry(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((dot - target).abs());
            }
        }
        dev
    }

    /// `‖F − Fᵀ‖_max`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.dim;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.entry(i, j) - self.entry(j, i)).abs());
            }
        }
        dev
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        let rows: Vec<&[f64]> = (0..self.dim).map(|i| self.row(i)).collect();
        CMatrix::from_real_rows(&rows)
    }
}

/// Overlap matrix between two tree families over the same sites, spin and projection.
pub fn recoupling_matrix(source: &[CouplingTree], target: &[CouplingTree]) -> Result<RecouplingMatrix> {
    if source.is_empty() || source.len() != target.len() {
        return Err(Error::IncompatibleShapes(format!(
            "family sizes {} and {} differ",
            source.len(),
            target.len()
        )));
    }
    let first = &source[0];
    for t in source.iter().chain(target) {
        if t.n_sites() != first.n_sites() || t.total_spin() != first.total_spin() || t.m() != first.m() {
            return Err(Error::IncompatibleShapes(format!(
                "{t} does not match {first} in sites, total spin or projection"
            )));
        }
    }
    let s_states: Vec<StateVector> = source.iter().map(build_state).collect();
    let t_states: Vec<StateVector> = target.iter().map(build_state).collect();
    for fam in [&s_states, &t_states] {
        let dev = orthonormality_deviation(fam);
        if dev > ORTHO_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
    }
    let dim = source.len();
    let mut entries = vec![0.0; dim * dim];
    for (i, s) in s_states.iter().enumerate() {
        for (j, t) in t_states.iter().enumerate() {
            let ov = t.inner(s);
            if ov.im.abs() > ORTHO_TOL {
                return Err(Error::IncompatibleShapes("complex overlap".into()));
            }
            entries[i * dim + j] = ov.re;
        }
    }
    let f = RecouplingMatrix { dim, entries, source: source.to_vec(), target: target.to_vec() };
    let dev = f.orthogonality_deviation();
    if dev > 1e-10 {
        return Err(Error::IncompatibleShapes(format!(
            "families span different spaces (FᵀF deviates by {dev:e})"
        )));
    }
    Ok(f)
}

/// `P = Σ|ψ⟩⟨ψ|` over an orthonormal tree family.
pub fn subspace_projector(trees: &[CouplingTree]) -> Result<CMatrix> {
    let states: Vec<StateVector> = trees.iter().map(build_state).collect();
    projector_from_states(&states)
}

pub(crate) fn projector_from_states(states: &[StateVector]) -> Result<CMatrix> {
    let Some(first) = states.first() else {
        return Err(Error::Domain("empty family".into()));
    };
    if states.iter().any(|s| s.n_sites != first.n_sites) {
        return Err(Error::Domain("states live on different chains".into()));
    }
    let dev = orthonormality_deviation(states);
    if dev > ORTHO_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let dim = first.amps.len();
    let mut p = CMatrix::zeros(dim, dim);
    for s in states {
        for (i, a) in s.amps.iter().enumerate().filter(|(_, a)| **a != ZERO) {
            for (j, b) in s.amps.iter().enumerate().filter(|(_, b)| **b != ZERO) {
                p[(i, j)] += a * b.conj();
            }
        }
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn number(&mut self) -> Result<i32> {
        self.skip_ws();
        let digits: String = self.src[self.pos..].chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.err("expected a number"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.err("number out of range"))
    }

    fn parse_all(mut self, labelled: bool) -> Result<Node> {
        let node = self.node(labelled)?;
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(node)
    }

    fn node(&mut self, labelled: bool) -> Result<Node> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let left = self.node(labelled)?;
                let right = self.node(labelled)?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                let spin = if self.src[self.pos..].starts_with('_') {
                    self.pos += 1;
                    let k = self.number()?;
                    if self.src[self.pos..].starts_with("/2") {
                        self.pos += 2;
                        HalfInt(k)
                    } else {
                        HalfInt::integer(k)
                    }
                } else if labelled {
                    return Err(self.err("missing spin label"));
                } else {
                    HalfInt::ZERO
                };
                Ok(Node::couple(left, right, spin))
            }
            Some(c) if c.is_ascii_digit() => Ok(Node::Site(self.number()? as usize)),
            _ => Err(self.err("expected '(' or a site index")),
        }
    }
}
