//! Lens spaces L(p,q) as glued bipyramids and their state-sum values.
//!
//! The p-gon `A_1..A_p` is fanned from `A_p` into triangles `A_l A_{l+1} A_p`,
//! `l = 1..p-2`. Over each triangle sit an N-tetrahedron and an S-tetrahedron.
//! Lateral face `A_L A_{L+1} N` is glued to `A_{L+q} A_{L+q+1} S`, indices
//! taken cyclically in `1..p`. Every tetrahedron carries m̄; its two input
//! faces are the lower legs and its two output faces the upper legs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frobenius::BilinearForm;
use crate::lawrence::MBAR_LEGS;
use crate::tensor::{contract, trace, DenseTensor, Scalar};

/// Largest supported number of polygon vertices.
pub const MAX_P: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    /// Polygon vertex `A_l`, 1-based.
    A(usize),
    N,
    S,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::A(l) => write!(f, "A{l}"),
            Vertex::N => f.write_str("N"),
            Vertex::S => f.write_str("S"),
        }
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Apex {
    N,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FaceSign {
    #[serde(rename = "-")]
    Input,
    #[serde(rename = "+")]
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    pub vertices: [Vertex; 3],
    pub sign: FaceSign,
    pub bond: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tetra {
    pub kind: Apex,
    pub l: usize,
    /// `(input, input, output, output)`
    pub faces: [Face; 4],
}

/// How the two faces of a bond are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mediator {
    /// An input face meets an output face.
    Direct,
    /// Two output faces, joined by `h_{jk}`.
    H,
    /// Two input faces, joined by `h^{jk}`.
    HInv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub id: usize,
    pub mediator: Mediator,
    /// `(tetra, face slot)` of both faces, in order of appearance.
    #[serde(skip)]
    pub ends: [(usize, usize); 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionNetwork {
    pub p: usize,
    pub q: usize,
    pub tetra: Vec<Tetra>,
    pub bonds: Vec<Bond>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn sorted(mut v: [Vertex; 3]) -> [Vertex; 3] {
    v.sort();
    v
}

pub fn build_lens(p: usize, q: usize) -> Result<ContractionNetwork> {
    if p < 3 {
        return Err(Error::LensParameters(format!("p must be at least 3, got {p}")));
    }
    if p > MAX_P {
        return Err(Error::LensParameters(format!("p must be at most {MAX_P}, got {p}")));
    }
    if q == 0 || q >= p {
        return Err(Error::LensParameters(format!("q must lie in 1..{p}, got {q}")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime);
    }
    let a = |l: usize| Vertex::A((l - 1) % p + 1);
    let lateral = |l: usize, apex: Vertex| sorted([a(l), a(l + 1), apex]);

    let mut shapes: Vec<(Apex, usize, [[Vertex; 3]; 4])> = Vec::with_capacity(2 * (p - 2));
    for l in 1..=p - 2 {
        shapes.push((
            Apex::N,
            l,
            [
                lateral(l, Vertex::N),
                sorted([a(l), a(p), Vertex::N]),
                sorted([a(l + 1), a(p), Vertex::N]),
                sorted([a(l), a(l + 1), a(p)]),
            ],
        ));
    }
    for l in 1..=p - 2 {
        shapes.push((
            Apex::S,
            l,
            [
                sorted([a(l), a(p), Vertex::S]),
                sorted([a(l), a(l + 1), a(p)]),
                lateral(l, Vertex::S),
                sorted([a(l + 1), a(p), Vertex::S]),
            ],
        ));
    }

    // every N face of the boundary is replaced by the S face it is glued to
    let glue: BTreeMap<[Vertex; 3], [Vertex; 3]> = (1..=p)
        .map(|l| (lateral(l, Vertex::N), lateral(l + q, Vertex::S)))
        .collect();

    let mut bond_of: BTreeMap<[Vertex; 3], usize> = BTreeMap::new();
    let mut ends: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut tetra = Vec::with_capacity(shapes.len());
    for (ti, (kind, l, faces)) in shapes.iter().enumerate() {
        let faces: Vec<Face> = faces
            .iter()
            .enumerate()
            .map(|(slot, vertices)| {
                let key = *glue.get(vertices).unwrap_or(vertices);
                let bond = *bond_of.entry(key).or_insert_with(|| {
                    ends.push(Vec::new());
                    ends.len() - 1
                });
                ends[bond].push((ti, slot));
                Face {
                    vertices: *vertices,
                    sign: if slot < 2 { FaceSign::Input } else { FaceSign::Output },
                    bond,
                }
            })
            .collect();
        tetra.push(Tetra {
            kind: *kind,
            l: *l,
            faces: faces.try_into().expect("four faces"),
        });
    }

    let bonds = ends
        .into_iter()
        .enumerate()
        .map(|(id, e)| {
            let pair: [(usize, usize); 2] = e
                .try_into()
                .map_err(|e: Vec<_>| Error::OpenNetwork(e.len()))?;
            let mediator = match (pair[0].1 < 2, pair[1].1 < 2) {
                (true, true) => Mediator::HInv,
                (false, false) => Mediator::H,
                _ => Mediator::Direct,
            };
            Ok(Bond { id, mediator, ends: pair })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ContractionNetwork { p, q, tetra, bonds })
}

impl ContractionNetwork {
    pub fn leg_count(&self) -> usize {
        4 * self.tetra.len()
    }

    /// Legs not attached to any bond. Zero for every network built here.
    pub fn open_legs(&self) -> usize {
        self.leg_count().saturating_sub(2 * self.bonds.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    /// The network written as a product of m̄ factors, `Q_{b0 b1}^{b2 b3}` per
    /// tetrahedron with bond ids as labels, followed by any mediators.
    pub fn pattern(&self) -> String {
        let mut out: Vec<String> = self
            .tetra
            .iter()
            .map(|t| {
                let b: Vec<usize> = t.faces.iter().map(|f| f.bond).collect();
                format!("Q_{{{} {}}}^{{{} {}}}", b[0], b[1], b[2], b[3])
            })
            .collect();
        for bond in &self.bonds {
            match bond.mediator {
                Mediator::Direct => {}
                Mediator::H => out.push(format!("h_{{{0} {0}'}}", bond.id)),
                Mediator::HInv => out.push(format!("h^{{{0} {0}'}}", bond.id)),
            }
        }
        out.join(" ")
    }
}

/// A tensor together with the edge attached to each of its legs.
struct Node {
    tensor: DenseTensor,
    edges: Vec<usize>,
}

/// Nodes and edges of the network with mediated bonds expanded into matrix
/// nodes. Each edge joins exactly two legs of opposite tags.
fn compile(net: &ContractionNetwork, qbar: &DenseTensor, h: &BilinearForm) -> Vec<Node> {
    let mut nodes: Vec<Node> = net
        .tetra
        .iter()
        .map(|_| Node {
            tensor: qbar.clone(),
            edges: vec![usize::MAX; 4],
        })
        .collect();
    let mut next_edge = 0;
    for bond in &net.bonds {
        let [(t0, s0), (t1, s1)] = bond.ends;
        match bond.mediator {
            Mediator::Direct => {
                nodes[t0].edges[s0] = next_edge;
                nodes[t1].edges[s1] = next_edge;
                next_edge += 1;
            }
            Mediator::H | Mediator::HInv => {
                let m = if bond.mediator == Mediator::H { h.h() } else { h.h_inv() };
                nodes[t0].edges[s0] = next_edge;
                nodes[t1].edges[s1] = next_edge + 1;
                nodes.push(Node {
                    tensor: m.clone(),
                    edges: vec![next_edge, next_edge + 1],
                });
                next_edge += 2;
            }
        }
    }
    nodes
}

fn shared_legs(a: &Node, b: &Node) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (la, ea) in a.edges.iter().enumerate() {
        if let Some(lb) = b.edges.iter().position(|eb| eb == ea) {
            pairs.push((la, lb));
        }
    }
    pairs
}

/// Traces out edges that have both ends on the same node.
fn close_self_edges(node: Node) -> Result<Node> {
    let mut pairs = Vec::new();
    for i in 0..node.edges.len() {
        for j in i + 1..node.edges.len() {
            if node.edges[i] == node.edges[j] {
                pairs.push((i, j));
            }
        }
    }
    if pairs.is_empty() {
        return Ok(node);
    }
    let tensor = trace(&node.tensor, &pairs)?;
    let edges = node
        .edges
        .iter()
        .enumerate()
        .filter(|(k, _)| !pairs.iter().any(|(i, j)| i == k || j == k))
        .map(|(_, e)| *e)
        .collect();
    Ok(Node { tensor, edges })
}

/// Result of a network evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Scalar,
    /// Largest rank of any intermediate tensor.
    pub peak_rank: usize,
}

/// Greedy pairwise contraction: repeatedly join the two nodes whose product has
/// the smallest rank, ties going to the lowest edge id.
pub fn evaluate_traced(
    net: &ContractionNetwork,
    qbar: &DenseTensor,
    h: &BilinearForm,
) -> Result<Evaluation> {
    if qbar.legs() != MBAR_LEGS {
        return Err(Error::Signature(format!("expected m̄ legs, got {:?}", qbar.legs())));
    }
    if qbar.n() != h.n() {
        return Err(Error::Dimension(format!("m̄ has dimension {}, h {}", qbar.n(), h.n())));
    }
    let open = net.open_legs();
    if open != 0 {
        return Err(Error::OpenNetwork(open));
    }
    let mut nodes: Vec<Option<Node>> = compile(net, qbar, h)
        .into_iter()
        .map(|n| close_self_edges(n).map(Some))
        .collect::<Result<_>>()?;
    let mut peak_rank = 4;

    loop {
        // (result rank, lowest shared edge, a, b)
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (a, na) in nodes.iter().enumerate() {
            let Some(na) = na else { continue };
            for (b, nb) in nodes.iter().enumerate().skip(a + 1) {
                let Some(nb) = nb else { continue };
                let shared = shared_legs(na, nb);
                if shared.is_empty() {
                    continue;
                }
                let rank = na.edges.len() + nb.edges.len() - 2 * shared.len();
                let edge = shared.iter().map(|(la, _)| na.edges[*la]).min().expect("nonempty");
                if best.is_none_or(|(r, e, _, _)| (rank, edge) < (r, e)) {
                    best = Some((rank, edge, a, b));
                }
            }
        }
        let Some((_, _, a, b)) = best else { break };
        let na = nodes[a].take().expect("alive");
        let nb = nodes[b].take().expect("alive");
        let pairs = shared_legs(&na, &nb);
        let tensor = contract(&na.tensor, &nb.tensor, &pairs)?;
        let edges: Vec<usize> = na
            .edges
            .iter()
            .enumerate()
            .filter(|(k, _)| !pairs.iter().any(|(la, _)| la == k))
            .map(|(_, e)| *e)
            .chain(
                nb.edges
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !pairs.iter().any(|(_, lb)| lb == k))
                    .map(|(_, e)| *e),
            )
            .collect();
        peak_rank = peak_rank.max(tensor.rank());
        nodes[a] = Some(close_self_edges(Node { tensor, edges })?);
    }

    let mut value = Scalar::new(1.0, 0.0);
    for node in nodes.into_iter().flatten() {
        value *= node
            .tensor
            .as_scalar()
            .ok_or(Error::OpenNetwork(node.edges.len()))?;
    }
    Ok(Evaluation { value, peak_rank })
}

pub fn evaluate(net: &ContractionNetwork, qbar: &DenseTensor, h: &BilinearForm) -> Result<Scalar> {
    Ok(evaluate_traced(net, qbar, h)?.value)
}

/// The state-sum value of L(p,q).
pub fn invariant(p: usize, q: usize, qbar: &DenseTensor, h: &BilinearForm) -> Result<Scalar> {
    evaluate(&build_lens(p, q)?, qbar, h)
}
