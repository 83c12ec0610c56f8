//! Exact maximum-weight matching on general graphs.
//!
//! This is a port of Joris van Rantwijk's reference implementation of
//! Galil's O(V³) formulation of Edmonds' blossom algorithm, specialised to
//! integer weights. With integer weights every dual update is integral (the
//! slack of an edge between two labelled vertices is always even), so the
//! whole computation stays in `i64` and the result is exact.
//!
//! The decoder consumes [`min_weight_perfect_matching`], which reduces
//! minimisation to maximum-cardinality/maximum-weight matching by
//! complementing the weights.

/// Compute a maximum-weight matching.
///
/// `edges` lists `(i, j, weight)` with `i != j`; duplicate edges must not be
/// passed. Returns `mate` with `mate[v] = Some(w)` iff the matching pairs
/// `v` with `w`. When `max_cardinality` is set, the matching has maximum
/// cardinality, and maximum weight among those.
pub fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, i64)],
    max_cardinality: bool,
) -> Vec<Option<usize>> {
    if n == 0 || edges.is_empty() {
        return vec![None; n];
    }
    let mut m = Matcher::new(n, edges, max_cardinality);
    m.solve();
    (0..n)
        .map(|v| {
            if m.mate[v] >= 0 {
                Some(m.endpoint[m.mate[v] as usize])
            } else {
                None
            }
        })
        .collect()
}

/// Compute a minimum-weight perfect matching, or `None` if the graph admits
/// no perfect matching. Returns `mate[v] = w` for every vertex.
pub fn min_weight_perfect_matching(n: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<usize>> {
    if n == 0 {
        return Some(Vec::new());
    }
    if n % 2 == 1 {
        return None;
    }
    let top = edges.iter().map(|e| e.2).max()?;
    let flipped: Vec<(usize, usize, i64)> =
        edges.iter().map(|&(i, j, w)| (i, j, top + 1 - w)).collect();
    let mate = max_weight_matching(n, &flipped, true);
    let mut out = vec![0usize; n];
    for (v, m) in mate.iter().enumerate() {
        out[v] = (*m)?;
    }
    Some(out)
}

/// Total weight of a matching given as vertex pairs.
pub fn matching_weight(edges: &[(usize, usize, i64)], mate: &[usize]) -> i64 {
    let mut total = 0;
    for &(i, j, w) in edges {
        if mate[i] == j {
            total += w;
        }
    }
    total
}

const NONE: isize = -1;

struct Matcher<'a> {
    nvertex: usize,
    edges: &'a [(usize, usize, i64)],
    max_cardinality: bool,
    /// `endpoint[p]` is the vertex at endpoint `p` of edge `p/2`.
    endpoint: Vec<usize>,
    /// `neighbend[v]` lists the remote endpoints of edges incident to `v`.
    neighbend: Vec<Vec<usize>>,
    /// `mate[v]` is the remote endpoint of `v`'s matched edge, or -1.
    mate: Vec<isize>,
    /// Per top-level blossom: 0 free, 1 S, 2 T (5 marks a breadcrumb).
    label: Vec<i8>,
    /// Endpoint through which a labelled blossom got its label.
    labelend: Vec<isize>,
    /// Top-level blossom containing each vertex.
    inblossom: Vec<usize>,
    blossomparent: Vec<isize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<isize>,
    blossomendps: Vec<Vec<usize>>,
    /// Least-slack edge to a different S-blossom, per blossom.
    bestedge: Vec<isize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<i64>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(nvertex: usize, edges: &'a [(usize, usize, i64)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            assert!(i != j && i < nvertex && j < nvertex, "bad edge ({i},{j})");
            endpoint.push(i);
            endpoint.push(j);
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![maxweight; nvertex];
        dualvar.extend(std::iter::repeat(0).take(nvertex));
        Matcher {
            nvertex,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase: (0..nvertex as isize).chain(std::iter::repeat(NONE).take(nvertex)).collect(),
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![None; 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * w
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nvertex {
            out.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                self.blossom_leaves(t, out);
            }
        }
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.blossom_leaves(b, &mut out);
        out
    }

    /// Label top-level blossom containing `w` with S (t=1) or T (t=2),
    /// coming through endpoint `p`.
    fn assign_label(&mut self, w: usize, t: i8, p: isize) {
        let b = self.inblossom[w];
        assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let mut new = self.leaves(b);
            self.queue.append(&mut new);
        } else {
            let base = self.blossombase[b] as usize;
            assert!(self.mate[base] >= 0, "T-blossom base must be matched");
            let mb = self.mate[base] as usize;
            self.assign_label(self.endpoint[mb], 1, self.mate[base] ^ 1);
        }
    }

    /// Trace back from the two S-vertices of edge `k` to discover either a
    /// common ancestor (returning its base vertex) or an augmenting path
    /// (returning -1).
    fn scan_blossom(&mut self, v: usize, w: usize) -> isize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v as isize, w as isize);
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v as usize];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            assert_eq!(self.labelend[b], self.mate[self.blossombase[b] as usize]);
            if self.labelend[b] == NONE {
                v = NONE; // the base of this blossom is single
            } else {
                v = self.endpoint[self.labelend[b] as usize] as isize;
                b = self.inblossom[v as usize];
                assert_eq!(self.label[b], 2);
                assert!(self.labelend[b] >= 0);
                v = self.endpoint[self.labelend[b] as usize] as isize;
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    /// Construct a new blossom with the given base, through S-vertices
    /// joined by edge `k`.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("blossom pool exhausted");
        self.blossombase[b] = base as isize;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b as isize;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b as isize;
            path.push(bv);
            endps.push(self.labelend[bv] as usize);
            assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv] as usize])
            );
            assert!(self.labelend[bv] >= 0);
            v = self.endpoint[self.labelend[bv] as usize];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b as isize;
            path.push(bw);
            endps.push(self.labelend[bw] as usize ^ 1);
            assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw] as usize])
            );
            assert!(self.labelend[bw] >= 0);
            w = self.endpoint[self.labelend[bw] as usize];
            bw = self.inblossom[w];
        }
        assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        for leaf in self.leaves_of_children(&path) {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        // Merge least-slack edge lists of the children.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match self.blossombestedges[bv].take() {
                Some(list) => vec![list],
                None => self
                    .leaves(bv)
                    .into_iter()
                    .map(|leaf| self.neighbend[leaf].iter().map(|p| p / 2).collect())
                    .collect(),
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE
                            || self.slack(k) < self.slack(bestedgeto[bj] as usize))
                    {
                        bestedgeto[bj] = k as isize;
                    }
                }
            }
            self.bestedge[bv] = NONE;
        }
        let best: Vec<usize> = bestedgeto
            .into_iter()
            .filter(|&k| k != NONE)
            .map(|k| k as usize)
            .collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b] as usize) {
                self.bestedge[b] = k as isize;
            }
        }
        self.blossombestedges[b] = Some(best);
    }

    fn leaves_of_children(&self, path: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &child in path {
            self.blossom_leaves(child, &mut out);
        }
        out
    }

    fn child(&self, b: usize, j: isize) -> usize {
        let m = self.blossomchilds[b].len() as isize;
        self.blossomchilds[b][j.rem_euclid(m) as usize]
    }

    fn endp(&self, b: usize, j: isize) -> usize {
        let m = self.blossomendps[b].len() as isize;
        self.blossomendps[b][j.rem_euclid(m) as usize]
    }

    /// Expand blossom `b`, turning its children into top-level blossoms.
    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        let childs = self.blossomchilds[b].clone();
        for &s in &childs {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.leaves(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        // A T-blossom expanded mid-stage must pass its label on.
        if !endstage && self.label[b] == 2 {
            assert!(self.labelend[b] >= 0);
            let entrychild =
                self.inblossom[self.endpoint[self.labelend[b] as usize ^ 1]];
            let mut j = childs.iter().position(|&c| c == entrychild).unwrap() as isize;
            let (jstep, endptrick): (isize, isize) = if j & 1 != 0 {
                j -= childs.len() as isize;
                (1, 0)
            } else {
                (-1, 1)
            };
            // Walk from the entry child towards the base, alternating T and
            // S labels along tight edges.
            let mut p = self.labelend[b] as usize;
            while j != 0 {
                let t_end = p ^ 1;
                let inner = self.endp(b, j - endptrick) ^ endptrick as usize ^ 1;
                self.label[self.endpoint[t_end]] = 0;
                self.label[self.endpoint[inner]] = 0;
                self.assign_label(self.endpoint[t_end], 2, p as isize);
                let fwd = self.endp(b, j - endptrick);
                self.allowedge[fwd / 2] = true;
                j += jstep;
                p = self.endp(b, j - endptrick) ^ endptrick as usize;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            // Relabel the base T-sub-blossom without stepping to its mate.
            let bv = self.child(b, j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p as isize;
            self.labelend[bv] = p as isize;
            self.bestedge[bv] = NONE;
            // The remaining children keep label-free status unless a vertex
            // inside was reached from outside; propagate those labels.
            j += jstep;
            while self.child(b, j) != entrychild {
                let bv = self.child(b, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut reached = NONE;
                for leaf in self.leaves(bv) {
                    if self.label[leaf] != 0 {
                        reached = leaf as isize;
                        break;
                    }
                }
                if reached != NONE {
                    let v = reached as usize;
                    assert_eq!(self.label[v], 2);
                    assert_eq!(self.inblossom[v], bv);
                    self.label[v] = 0;
                    let base_mate =
                        self.mate[self.blossombase[bv] as usize] as usize;
                    self.label[self.endpoint[base_mate]] = 0;
                    let le = self.labelend[v];
                    self.assign_label(v, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = -1;
        self.labelend[b] = NONE;
        self.blossomchilds[b].clear();
        self.blossomendps[b].clear();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = None;
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    /// Swap matched and unmatched edges around blossom `b` so that vertex
    /// `v` becomes its new base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b as isize {
            t = self.blossomparent[t] as usize;
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as isize;
        let mut j = i;
        let (jstep, endptrick): (isize, isize) = if i & 1 != 0 {
            j -= self.blossomchilds[b].len() as isize;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let t = self.child(b, j);
            let p = self.endp(b, j - endptrick) ^ endptrick as usize;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            let t = self.child(b, j);
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p as isize ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p as isize;
        }
        let shift = i.rem_euclid(self.blossomchilds[b].len() as isize) as usize;
        self.blossomchilds[b].rotate_left(shift);
        self.blossomendps[b].rotate_left(shift);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        assert_eq!(self.blossombase[b], v as isize);
    }

    /// Augment the matching along the path through edge `k`.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let (mut s, mut p) = (s0, p0);
            loop {
                let bs = self.inblossom[s];
                assert_eq!(self.label[bs], 1);
                assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs] as usize]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p as isize;
                if self.labelend[bs] == NONE {
                    break; // reached a single vertex
                }
                let t = self.endpoint[self.labelend[bs] as usize];
                let bt = self.inblossom[t];
                assert_eq!(self.label[bt], 2);
                assert!(self.labelend[bt] >= 0);
                s = self.endpoint[self.labelend[bt] as usize];
                let j = self.endpoint[self.labelend[bt] as usize ^ 1];
                assert_eq!(self.blossombase[bt], t as isize);
                if bt >= self.nvertex {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] as usize ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        let nedge = self.edges.len();
        for _stage in 0..self.nvertex {
            self.label = vec![0; 2 * self.nvertex];
            self.bestedge = vec![NONE; 2 * self.nvertex];
            for slot in &mut self.blossombestedges[self.nvertex..] {
                *slot = None;
            }
            self.allowedge = vec![false; nedge];
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    assert_eq!(self.label[self.inblossom[v]], 1);
                    for pi in 0..self.neighbend[v].len() {
                        let p = self.neighbend[v][pi];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allowedge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            }
                        }
                        if self.allowedge[k] {
                            if self.label[self.inblossom[w]] == 0 {
                                self.assign_label(w, 2, p as isize ^ 1);
                            } else if self.label[self.inblossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base >= 0 {
                                    self.add_blossom(base as usize, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                assert_eq!(self.label[self.inblossom[w]], 2);
                                self.label[w] = 2;
                                self.labelend[w] = p as isize ^ 1;
                            }
                        } else if self.label[self.inblossom[w]] == 1 {
                            let b = self.inblossom[v];
                            if self.bestedge[b] == NONE
                                || kslack < self.slack(self.bestedge[b] as usize)
                            {
                                self.bestedge[b] = k as isize;
                            }
                        } else if self.label[w] == 0
                            && (self.bestedge[w] == NONE
                                || kslack < self.slack(self.bestedge[w] as usize))
                        {
                            self.bestedge[w] = k as isize;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }
                // No augmenting path under the current duals: compute the
                // largest safe dual update.
                let mut deltatype = -1;
                let mut delta = 0i64;
                let mut deltaedge = 0usize;
                let mut deltablossom = 0usize;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = *self.dualvar[..self.nvertex].iter().min().unwrap();
                }
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v] as usize);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v] as usize;
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b] as usize);
                        debug_assert_eq!(kslack % 2, 0, "S-S slack must be even");
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b] as usize;
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] >= 0
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    // No further improvement possible; max-cardinality
                    // optimum reached.
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex]
                        .iter()
                        .min()
                        .copied()
                        .unwrap()
                        .max(0);
                }
                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] >= 0 && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match deltatype {
                    1 => break,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] >= 0
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        if cfg!(debug_assertions) {
            self.verify_optimum();
        }
    }

    /// Check the linear-programming certificate of optimality. Exact for
    /// integer weights.
    fn verify_optimum(&self) {
        let vdualoffset = if self.max_cardinality {
            (-self.dualvar[..self.nvertex].iter().min().copied().unwrap_or(0)).max(0)
        } else {
            0
        };
        assert!(
            self.dualvar[..self.nvertex].iter().min().copied().unwrap_or(0) + vdualoffset >= 0
        );
        assert!(self.dualvar[self.nvertex..].iter().min().copied().unwrap_or(0) >= 0);
        for (k, &(i, j, w)) in self.edges.iter().enumerate() {
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * w;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()] as usize);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()] as usize);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (bi, bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[*bi];
            }
            assert!(s >= 0, "negative slack on edge {k}");
            let matched_i = self.mate[i] >= 0 && self.mate[i] as usize / 2 == k;
            let matched_j = self.mate[j] >= 0 && self.mate[j] as usize / 2 == k;
            if matched_i || matched_j {
                assert!(matched_i && matched_j);
                assert_eq!(s, 0, "matched edge {k} is not tight");
            }
        }
        for v in 0..self.nvertex {
            assert!(self.mate[v] >= 0 || self.dualvar[v] + vdualoffset == 0);
        }
        for b in self.nvertex..2 * self.nvertex {
            if self.blossombase[b] >= 0 && self.dualvar[b] > 0 {
                assert_eq!(self.blossomendps[b].len() % 2, 1);
                for p in self.blossomendps[b].iter().skip(1).step_by(2) {
                    assert_eq!(self.mate[self.endpoint[*p]], *p as isize ^ 1);
                    assert_eq!(self.mate[self.endpoint[*p ^ 1]], *p as isize);
                }
            }
        }
    }
}
