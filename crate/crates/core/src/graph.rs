//! Hamiltonian adjacency graphs over constrained bases: single-spin-flip
//! edges, Hamming layer structure, maximal vertex sets, the bridge-density
//! coordinate and the paired-cell hypergrid subgraphs.

use num_bigint::BigUint;

use crate::basis::{big_ln, enumerate_basis, Basis, ConstraintSpec, ModelFamily, SpinConfig};
use crate::error::{Result, ScarError};

/// Sparse symmetric operator in compressed sparse row form. Weights are
/// omitted when uniformly 1, which covers every adjacency Hamiltonian here.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    weights: Option<Vec<f64>>,
}

impl SparseOperator {
    pub fn from_edges(dim: usize, edges: &[(u32, u32)]) -> SparseOperator {
        let mut deg = vec![0usize; dim];
        for &(u, v) in edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut row_ptr = vec![0usize; dim + 1];
        for i in 0..dim {
            row_ptr[i + 1] = row_ptr[i] + deg[i];
        }
        let mut cols = vec![0u32; row_ptr[dim]];
        let mut fill = row_ptr.clone();
        for &(u, v) in edges {
            cols[fill[u as usize]] = v;
            fill[u as usize] += 1;
            cols[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..dim {
            cols[row_ptr[i]..row_ptr[i + 1]].sort_unstable();
        }
        SparseOperator {
            dim,
            row_ptr,
            cols,
            weights: None,
        }
    }

    /// Directed variant: only the given (source, target) arcs are stored,
    /// rows indexed by target.
    pub fn from_arcs(dim: usize, arcs: &[(u32, u32)]) -> SparseOperator {
        let mut deg = vec![0usize; dim];
        for &(_, v) in arcs {
            deg[v as usize] += 1;
        }
        let mut row_ptr = vec![0usize; dim + 1];
        for i in 0..dim {
            row_ptr[i + 1] = row_ptr[i] + deg[i];
        }
        let mut cols = vec![0u32; row_ptr[dim]];
        let mut fill = row_ptr.clone();
        for &(u, v) in arcs {
            cols[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..dim {
            cols[row_ptr[i]..row_ptr[i + 1]].sort_unstable();
        }
        SparseOperator {
            dim,
            row_ptr,
            cols,
            weights: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    /// y = A x for real vectors.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        match &self.weights {
            None => {
                for i in 0..self.dim {
                    let mut acc = 0.0;
                    for &j in self.neighbors(i) {
                        acc += x[j as usize];
                    }
                    y[i] = acc;
                }
            }
            Some(w) => {
                for i in 0..self.dim {
                    let mut acc = 0.0;
                    for (idx, &j) in self.neighbors(i).iter().enumerate() {
                        acc += w[self.row_ptr[i] + idx] * x[j as usize];
                    }
                    y[i] = acc;
                }
            }
        }
    }

    /// y = A x for complex vectors.
    pub fn apply_c64(&self, x: &[num_complex::Complex64], y: &mut [num_complex::Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        match &self.weights {
            None => {
                for i in 0..self.dim {
                    let mut acc = num_complex::Complex64::ZERO;
                    for &j in self.neighbors(i) {
                        acc += x[j as usize];
                    }
                    y[i] = acc;
                }
            }
            Some(w) => {
                for i in 0..self.dim {
                    let mut acc = num_complex::Complex64::ZERO;
                    for (idx, &j) in self.neighbors(i).iter().enumerate() {
                        acc += w[self.row_ptr[i] + idx] * x[j as usize];
                    }
                    y[i] = acc;
                }
            }
        }
    }

    /// The same pattern with every entry set to `w`.
    pub fn with_uniform_weight(&self, w: f64) -> SparseOperator {
        SparseOperator {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            weights: Some(vec![w; self.cols.len()]),
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::<f64>::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for (idx, &j) in self.neighbors(i).iter().enumerate() {
                let w = self
                    .weights
                    .as_ref()
                    .map_or(1.0, |ws| ws[self.row_ptr[i] + idx]);
                m[(i, j as usize)] = w;
            }
        }
        m
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.dim).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .filter(move |&&j| (j as usize) > i)
                .map(move |&j| (i as u32, j))
        })
    }
}

/// Adjacency Hamiltonian of a basis: an edge wherever two basis words
/// differ in exactly one bit.
pub fn build_adjacency(basis: &Basis) -> Result<SparseOperator> {
    if basis.is_empty() {
        return Err(ScarError::invalid("empty basis"));
    }
    let n = basis.n_sites();
    let mut edges = Vec::new();
    for i in 0..basis.len() {
        let b = basis.bits(i);
        for site in 0..n {
            let flipped = b ^ (1 << site);
            if flipped > b {
                if let Some(j) = basis.index_of(flipped) {
                    edges.push((i as u32, j));
                }
            }
        }
    }
    Ok(SparseOperator::from_edges(basis.len(), &edges))
}

/// Vertex layering by Hamming distance from a root configuration.
#[derive(Clone, Debug)]
pub struct HammingLayers {
    pub root: SpinConfig,
    pub layer: Vec<u32>,
    pub populations: Vec<usize>,
}

impl HammingLayers {
    pub fn depth(&self) -> usize {
        self.populations.len() - 1
    }
}

/// Assign every vertex its Hamming distance to `root` and check that edges
/// only connect consecutive layers.
pub fn hamming_layers(
    graph: &SparseOperator,
    basis: &Basis,
    root: &SpinConfig,
) -> Result<HammingLayers> {
    let root_idx = basis
        .index_of(root.bits())
        .ok_or_else(|| ScarError::invalid("root configuration not in basis"))?;
    let _ = root_idx;
    let layer: Vec<u32> = (0..basis.len())
        .map(|i| (basis.bits(i) ^ root.bits()).count_ones())
        .collect();
    let depth = *layer.iter().max().unwrap() as usize;
    let mut populations = vec![0usize; depth + 1];
    for &l in &layer {
        populations[l as usize] += 1;
    }
    for i in 0..graph.dim() {
        for &j in graph.neighbors(i) {
            let (a, b) = (layer[i], layer[j as usize]);
            if a.abs_diff(b) != 1 {
                return Err(ScarError::contract(format!(
                    "intra-layer edge between {} and {}",
                    basis.config(i),
                    basis.config(j as usize)
                )));
            }
        }
    }
    Ok(HammingLayers {
        root: *root,
        layer,
        populations,
    })
}

/// The unique minimal generating set of a downward-closed basis: vertices
/// with no strict superset in the basis.
pub fn maximal_vertices(basis: &Basis) -> Result<Vec<SpinConfig>> {
    let n = basis.n_sites();
    // downward closure is a precondition; verify it
    for i in 0..basis.len() {
        let b = basis.bits(i);
        for site in 0..n {
            if (b >> site) & 1 == 1 && !basis.contains(b ^ (1 << site)) {
                return Err(ScarError::contract(
                    "basis is not downward closed".to_string(),
                ));
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..basis.len() {
        let b = basis.bits(i);
        let mut is_max = true;
        for site in 0..n {
            if (b >> site) & 1 == 0 && basis.contains(b | (1 << site)) {
                is_max = false;
                break;
            }
        }
        if is_max {
            out.push(basis.config(i));
        }
    }
    Ok(out)
}

/// Logarithmic interpolation coordinate between the two-hypercube graph
/// (lambda = 0) and the full hypercube (lambda = 1).
pub fn bridge_density(basis_size: &BigUint, n: usize) -> Result<f64> {
    let low = (BigUint::from(1u32) << (n / 2 + 1)) - BigUint::from(1u32);
    let high = BigUint::from(1u32) << n;
    if basis_size < &low || basis_size > &high {
        return Err(ScarError::invalid(format!(
            "graph size {basis_size} outside [{low}, {high}]"
        )));
    }
    let ln_low = big_ln(&low);
    Ok((big_ln(basis_size) - ln_low) / (big_ln(&high) - ln_low))
}

/// All configurations whose every two-site cell, under the pairing with the
/// given offset, avoids the doubly-excited value. Cardinality 3^(N/2).
pub fn build_hypergrid_vertices(n: usize, pairing_offset: usize) -> Result<Vec<u64>> {
    if n % 2 != 0 || n == 0 || n > 62 {
        return Err(ScarError::invalid("hypergrid needs even N in 2..=62"));
    }
    if pairing_offset > 1 {
        return Err(ScarError::invalid("pairing offset is 0 or 1"));
    }
    // generate the offset-0 set cell by cell, then rotate for offset 1
    let cells = n / 2;
    let mut acc: Vec<u64> = vec![0];
    for cell in 0..cells {
        let mut next = Vec::with_capacity(acc.len() * 3);
        for &base in &acc {
            for cell_bits in [0b00u64, 0b01, 0b10] {
                next.push(base | (cell_bits << (2 * cell)));
            }
        }
        acc = next;
    }
    if pairing_offset == 1 {
        for b in acc.iter_mut() {
            let c = SpinConfig::new(*b, n).unwrap();
            *b = c.translated(1).bits();
        }
    }
    acc.sort_unstable();
    Ok(acc)
}

/// The union of the two pairing hypergrids as a standalone model: vertex
/// set plus the edges legal inside at least one of the hypergrids.
/// The intersection of the two vertex sets is checked to be exactly the
/// PXP vertex set.
pub fn build_2hg(n: usize) -> Result<(Basis, SparseOperator)> {
    let v0 = build_hypergrid_vertices(n, 0)?;
    let v1 = build_hypergrid_vertices(n, 1)?;
    let set0: fnv::FnvHashSet<u64> = v0.iter().copied().collect();
    let set1: fnv::FnvHashSet<u64> = v1.iter().copied().collect();

    let pxp = enumerate_basis(&ConstraintSpec::new(ModelFamily::Pxp), n)?;
    let inter: Vec<u64> = v0.iter().copied().filter(|b| set1.contains(b)).collect();
    let pxp_set: Vec<u64> = pxp.iter().collect();
    if inter != pxp_set {
        return Err(ScarError::contract(
            "hypergrid intersection does not reproduce the PXP vertex set",
        ));
    }

    let mut union: Vec<u64> = set0.union(&set1).copied().collect();
    union.sort_unstable();
    let basis = Basis::from_maximal_set(n, &union)?;
    // the union is already downward closed, so the closure adds nothing
    debug_assert_eq!(basis.len(), union.len());

    let mut edges = Vec::new();
    for i in 0..basis.len() {
        let b = basis.bits(i);
        for site in 0..n {
            let f = b ^ (1 << site);
            if f <= b {
                continue;
            }
            if let Some(j) = basis.index_of(f) {
                let in0 = set0.contains(&b) && set0.contains(&f);
                let in1 = set1.contains(&b) && set1.contains(&f);
                if in0 || in1 {
                    edges.push((i as u32, j));
                }
            }
        }
    }
    let adjacency = SparseOperator::from_edges(basis.len(), &edges);
    Ok((basis, adjacency))
}

/// Corners of the pairing-`offset` hypergrid (every cell at an extremal
/// value) with no model edge leaving that hypergrid's vertex set. `graph`
/// and `model_basis` describe the ambient model, typically (2,3).
pub fn edge_free_corners(
    model_basis: &Basis,
    graph: &SparseOperator,
    offset: usize,
) -> Result<Vec<SpinConfig>> {
    let n = model_basis.n_sites();
    let vset: fnv::FnvHashSet<u64> = build_hypergrid_vertices(n, offset)?.into_iter().collect();
    let cells = n / 2;
    let mut corners = Vec::new();
    for pattern in 0..(1u64 << cells) {
        let mut bits = 0u64;
        for cell in 0..cells {
            let local = if (pattern >> cell) & 1 == 0 { 0b01u64 } else { 0b10 };
            bits |= local << (2 * cell);
        }
        let c = SpinConfig::new(bits, n).unwrap();
        let bits = if offset == 1 { c.translated(1).bits() } else { bits };
        if let Some(idx) = model_basis.index_of(bits) {
            let leaves = graph
                .neighbors(idx as usize)
                .iter()
                .any(|&j| !vset.contains(&model_basis.bits(j as usize)));
            if !leaves {
                corners.push(SpinConfig::new(bits, n).unwrap());
            }
        }
    }
    corners.sort();
    Ok(corners)
}

/// Outcome of the partial-cube certification.
#[derive(Clone, Debug)]
pub struct PartialCubeReport {
    pub is_partial_cube: bool,
    /// A vertex pair whose graph distance disagrees with the Hamming
    /// distance (or is unreachable), when certification fails.
    pub witness: Option<(u32, u32)>,
    pub pairs_checked: usize,
}

const PARTIAL_CUBE_EXHAUSTIVE_LIMIT: usize = 10_000;
const PARTIAL_CUBE_SAMPLES: usize = 10_000;

/// Check that graph distance equals Hamming distance for vertex pairs:
/// exhaustively for dimensions up to 10^4, on a deterministic pseudo-random
/// sample of pairs above that.
pub fn verify_partial_cube(graph: &SparseOperator, basis: &Basis) -> PartialCubeReport {
    let d = graph.dim();
    let mut dist = vec![u32::MAX; d];
    let mut queue = std::collections::VecDeque::new();
    let bfs = |src: usize, dist: &mut Vec<u32>, queue: &mut std::collections::VecDeque<usize>| {
        dist.iter_mut().for_each(|x| *x = u32::MAX);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &v in graph.neighbors(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = dist[u] + 1;
                    queue.push_back(v as usize);
                }
            }
        }
    };
    let mut pairs_checked = 0usize;
    if d <= PARTIAL_CUBE_EXHAUSTIVE_LIMIT {
        for src in 0..d {
            bfs(src, &mut dist, &mut queue);
            for t in 0..d {
                let hamming = (basis.bits(src) ^ basis.bits(t)).count_ones();
                pairs_checked += 1;
                if dist[t] != hamming {
                    return PartialCubeReport {
                        is_partial_cube: false,
                        witness: Some((src as u32, t as u32)),
                        pairs_checked,
                    };
                }
            }
        }
    } else {
        // xorshift-based deterministic pair sample
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut by_src: fnv::FnvHashMap<usize, Vec<usize>> = fnv::FnvHashMap::default();
        for _ in 0..PARTIAL_CUBE_SAMPLES {
            let s = (next() % d as u64) as usize;
            let t = (next() % d as u64) as usize;
            by_src.entry(s).or_default().push(t);
        }
        for (src, targets) in by_src {
            bfs(src, &mut dist, &mut queue);
            for t in targets {
                let hamming = (basis.bits(src) ^ basis.bits(t)).count_ones();
                pairs_checked += 1;
                if dist[t] != hamming {
                    return PartialCubeReport {
                        is_partial_cube: false,
                        witness: Some((src as u32, t as u32)),
                        pairs_checked,
                    };
                }
            }
        }
    }
    PartialCubeReport {
        is_partial_cube: true,
        witness: None,
        pairs_checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Boundary;

    fn pbasis(family: ModelFamily, n: usize) -> Basis {
        enumerate_basis(&ConstraintSpec::new(family), n).unwrap()
    }

    #[test]
    fn free_n2_is_a_four_cycle() {
        let basis = pbasis(ModelFamily::Free, 2);
        let g = build_adjacency(&basis).unwrap();
        assert_eq!(g.dim(), 4);
        assert_eq!(g.nnz(), 8);
        for i in 0..4 {
            assert_eq!(g.degree(i), 2);
        }
    }

    #[test]
    fn pxp_n4_degrees() {
        let basis = pbasis(ModelFamily::Pxp, 4);
        let g = build_adjacency(&basis).unwrap();
        assert_eq!(g.dim(), 7);
        let deg_of = |s: &str| g.degree(basis.index_of(SpinConfig::parse(s).unwrap().bits()).unwrap() as usize);
        assert_eq!(deg_of("0000"), 4);
        // on the 4-ring each single excitation can only hop to the vacuum
        // or complete one Neel state: two of its three flips wrap into a
        // forbidden adjacent pair
        for s in ["1000", "0100", "0010", "0001"] {
            assert_eq!(deg_of(s), 2);
        }
        assert_eq!(deg_of("1010"), 2);
        assert_eq!(deg_of("0101"), 2);
        assert_eq!(g.nnz() / 2, 8);
    }

    #[test]
    fn two_hypercube_embeds_in_pxp() {
        // the PXP graph restricted to the two-hypercube vertex set equals the
        // two-hypercube graph
        for n in [4usize, 6, 8, 10] {
            let pxp = pbasis(ModelFamily::Pxp, n);
            let two = pbasis(ModelFamily::TwoHypercube, n);
            let g_pxp = build_adjacency(&pxp).unwrap();
            let g_two = build_adjacency(&two).unwrap();
            for b in two.iter() {
                assert!(pxp.contains(b));
            }
            let mut induced: Vec<(u64, u64)> = Vec::new();
            for (u, v) in g_pxp.edges() {
                let (bu, bv) = (pxp.bits(u as usize), pxp.bits(v as usize));
                if two.contains(bu) && two.contains(bv) {
                    induced.push((bu.min(bv), bu.max(bv)));
                }
            }
            let mut direct: Vec<(u64, u64)> = g_two
                .edges()
                .map(|(u, v)| {
                    let (bu, bv) = (two.bits(u as usize), two.bits(v as usize));
                    (bu.min(bv), bu.max(bv))
                })
                .collect();
            induced.sort_unstable();
            direct.sort_unstable();
            assert_eq!(induced, direct, "N={n}");
        }
    }

    #[test]
    fn layer_examples() {
        let free = pbasis(ModelFamily::Free, 4);
        let g = build_adjacency(&free).unwrap();
        let layers = hamming_layers(&g, &free, &SpinConfig::neel(4).unwrap()).unwrap();
        assert_eq!(layers.populations, vec![1, 4, 6, 4, 1]);

        let two = pbasis(ModelFamily::TwoHypercube, 4);
        let g2 = build_adjacency(&two).unwrap();
        let l2 = hamming_layers(&g2, &two, &SpinConfig::parse("1010").unwrap()).unwrap();
        assert_eq!(l2.populations, vec![1, 2, 1, 2, 1]);

        let pxp6 = pbasis(ModelFamily::Pxp, 6);
        let g6 = build_adjacency(&pxp6).unwrap();
        let l6 = hamming_layers(&g6, &pxp6, &SpinConfig::neel(6).unwrap()).unwrap();
        assert_eq!(l6.populations.iter().sum::<usize>(), 18);
    }

    #[test]
    fn maximal_vertices_pxp6() {
        let basis = pbasis(ModelFamily::Pxp, 6);
        let maximal = maximal_vertices(&basis).unwrap();
        let expect: Vec<SpinConfig> = ["101010", "010101", "100100", "010010", "001001"]
            .iter()
            .map(|s| SpinConfig::parse(s).unwrap())
            .collect();
        let mut expect = expect;
        expect.sort();
        assert_eq!(maximal, expect);

        let free = pbasis(ModelFamily::Free, 3);
        assert_eq!(
            maximal_vertices(&free).unwrap(),
            vec![SpinConfig::parse("111").unwrap()]
        );

        let two = pbasis(ModelFamily::TwoHypercube, 4);
        let mut expect2 = vec![
            SpinConfig::parse("1010").unwrap(),
            SpinConfig::parse("0101").unwrap(),
        ];
        expect2.sort();
        assert_eq!(maximal_vertices(&two).unwrap(), expect2);
    }

    #[test]
    fn maximal_regenerates_basis() {
        for (family, ns) in [
            (ModelFamily::Pxp, vec![4usize, 8, 12, 14]),
            (ModelFamily::Kk(2), vec![6, 9, 12]),
            (ModelFamily::Blockade(2), vec![6, 9, 12]),
            (ModelFamily::TwoHypergrid, vec![6, 10]),
        ] {
            for n in ns {
                let basis = pbasis(family.clone(), n);
                let maximal = maximal_vertices(&basis).unwrap();
                let bits: Vec<u64> = maximal.iter().map(|m| m.bits()).collect();
                let closure = Basis::from_maximal_set(n, &bits).unwrap();
                assert_eq!(closure.len(), basis.len(), "{} N={n}", family.label());
                assert!(closure.iter().zip(basis.iter()).all(|(a, b)| a == b));
            }
        }
    }

    #[test]
    fn bridge_density_endpoints() {
        let n = 12usize;
        let low = BigUint::from((1u64 << (n / 2 + 1)) - 1);
        let high = BigUint::from(1u64 << n);
        assert_eq!(bridge_density(&low, n).unwrap(), 0.0);
        assert_eq!(bridge_density(&high, n).unwrap(), 1.0);
        let pxp = BigUint::from(322u32);
        let lam = bridge_density(&pxp, n).unwrap();
        assert!((lam - 0.2679).abs() < 5e-4, "{lam}");
        assert!(bridge_density(&BigUint::from(10u32), n).is_err());
    }

    #[test]
    fn hypergrid_vertex_sets() {
        let v = build_hypergrid_vertices(4, 0).unwrap();
        assert_eq!(v.len(), 9);
        let v8 = build_hypergrid_vertices(8, 0).unwrap();
        assert_eq!(v8.len(), 81);
        assert!(v8.contains(&SpinConfig::parse("10011001").unwrap().bits()));
        let v8b = build_hypergrid_vertices(8, 1).unwrap();
        assert!(v8b.contains(&SpinConfig::parse("11001100").unwrap().bits()));
        // membership matches the per-cell predicate
        for n in [4usize, 6, 8] {
            for offset in [0, 1] {
                let set: fnv::FnvHashSet<u64> = build_hypergrid_vertices(n, offset)
                    .unwrap()
                    .into_iter()
                    .collect();
                for b in 0..(1u64 << n) {
                    let c = SpinConfig::new(b, n).unwrap();
                    let ok = (0..n / 2).all(|j| {
                        let a = (2 * j + offset) % n;
                        let b2 = (2 * j + 1 + offset) % n;
                        !(c.bit(a) && c.bit(b2))
                    });
                    assert_eq!(set.contains(&b), ok, "N={n} offset={offset} b={b:b}");
                }
            }
        }
    }

    #[test]
    fn two_hypergrid_union_counts() {
        for n in [4usize, 6, 8, 10, 12] {
            let (basis, graph) = build_2hg(n).unwrap();
            let pxp = pbasis(ModelFamily::Pxp, n);
            let expect = 2 * 3usize.pow((n / 2) as u32) - pxp.len();
            assert_eq!(basis.len(), expect, "N={n}");
            // matches the predicate-driven enumeration as well
            let by_spec = pbasis(ModelFamily::TwoHypergrid, n);
            assert_eq!(basis.len(), by_spec.len());
            assert!(basis.iter().zip(by_spec.iter()).all(|(a, b)| a == b));
            // edges stay inside one hypergrid by construction
            assert!(graph.nnz() > 0);
        }
    }

    #[test]
    fn partial_cube_checks() {
        for (family, n) in [
            (ModelFamily::Pxp, 8usize),
            (ModelFamily::TwoHypercube, 8),
            (ModelFamily::Kk(2), 8),
            (ModelFamily::Blockade(2), 9),
        ] {
            let basis = pbasis(family.clone(), n);
            let g = build_adjacency(&basis).unwrap();
            let report = verify_partial_cube(&g, &basis);
            assert!(report.is_partial_cube, "{} N={n}", family.label());
        }
        // constructed witness: {00, 01, 10} with the 2-path through 00
        // removed leaves 01 and 10 at graph distance infinity
        let basis = Basis::from_maximal_set(2, &[0b01, 0b10]).unwrap();
        let edges = vec![(0u32, 1u32)]; // 00 - 01 only
        let g = SparseOperator::from_edges(3, &edges);
        let report = verify_partial_cube(&g, &basis);
        assert!(!report.is_partial_cube);
        assert!(report.witness.is_some());
    }

    #[test]
    fn graphs_are_bipartite_by_parity() {
        for (family, n) in [
            (ModelFamily::Pxp, 10usize),
            (ModelFamily::Kk(2), 10),
            (ModelFamily::TwoHypergrid, 8),
            (ModelFamily::StarHypercubes(2), 9),
        ] {
            let basis = pbasis(family.clone(), n);
            let g = build_adjacency(&basis).unwrap();
            for (u, v) in g.edges() {
                let pu = basis.bits(u as usize).count_ones() % 2;
                let pv = basis.bits(v as usize).count_ones() % 2;
                assert_ne!(pu, pv, "{} N={n}", family.label());
            }
        }
    }

    #[test]
    fn obc_dimension_counting_still_works() {
        // graph construction is PBC territory, but dimension counting is not
        let s = ConstraintSpec::new(ModelFamily::Pxp).with_boundary(Boundary::Open);
        let basis = enumerate_basis(&s, 5).unwrap();
        assert_eq!(basis.len(), 13); // Fibonacci F_7
    }
}
