//! Immutable algebraic-circuit DAGs over a field parameter.
//!
//! Nodes are fan-in-2 gates stored in topological order (children precede
//! parents). Structurally identical nodes are deduplicated at construction
//! so that shared subcircuits cost one copy; Newton iteration depends on
//! this sharing to stay small.

mod degree;
mod divisions;
mod eval;
mod hom;
mod transform;

pub use degree::{formal_degree, formal_degree_in_var, DegreeBound};
pub use divisions::{eliminate_divisions, eliminate_divisions_combined};
pub use eval::{evaluate, evaluate_single, evaluate_trace};
pub use hom::hom_table;
pub use transform::{
    embed_rational, map_constants, scale, set_var, substitute_affine, truncate_vars, AffineForm,
    AffineMap,
};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::Field;

pub type NodeId = u32;

/// A single gate. `Var` indices are < the circuit's `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node<F> {
    Var(u32),
    Const(F),
    Add(NodeId, NodeId),
    Sub(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Div(NodeId, NodeId),
}

impl<F> Node<F> {
    /// Children of a binary gate; leaves return `None`.
    pub fn binary_children(&self) -> Option<(NodeId, NodeId)> {
        match self {
            Node::Var(_) | Node::Const(_) => None,
            Node::Add(l, r) | Node::Sub(l, r) | Node::Mul(l, r) | Node::Div(l, r) => {
                Some((*l, *r))
            }
        }
    }
}

/// Errors from circuit construction, evaluation and transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircuitError {
    /// A division gate's denominator evaluated to zero; carries the gate id.
    DivisionByZero { gate: NodeId },
    /// An operation required a division-free circuit.
    DivGatePresent { gate: NodeId },
    /// Evaluation point arity does not match `nvars`.
    WrongArity { expected: u32, got: u32 },
    /// Variable index out of range.
    BadVariable { index: u32 },
    /// Scaling by zero requested.
    ScaleByZero,
    /// Operation expects exactly one output.
    NotSingleOutput,
    /// A size or degree cap was exceeded.
    CapExceeded(String),
    /// Field-level failure (e.g. inverting zero constant).
    Field(crate::field::FieldError),
}

impl fmt::Display for CircuitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircuitError::DivisionByZero { gate } => {
                write!(f, "division by zero at gate {gate}")
            }
            CircuitError::DivGatePresent { gate } => {
                write!(f, "division gate {gate} present in division-free context")
            }
            CircuitError::WrongArity { expected, got } => {
                write!(f, "expected {expected} point coordinates, got {got}")
            }
            CircuitError::BadVariable { index } => write!(f, "variable {index} out of range"),
            CircuitError::ScaleByZero => write!(f, "scale factor must be nonzero"),
            CircuitError::NotSingleOutput => write!(f, "expected a single-output circuit"),
            CircuitError::CapExceeded(msg) => write!(f, "cap exceeded: {msg}"),
            CircuitError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl From<crate::field::FieldError> for CircuitError {
    fn from(e: crate::field::FieldError) -> Self {
        CircuitError::Field(e)
    }
}

/// Size, depth and formal-degree measurements.
///
/// `size` follows the convention of edge count plus the total description
/// length of the constants, in bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitStats {
    pub nodes: usize,
    pub edges: usize,
    pub const_bits: u64,
    pub size: u64,
    pub depth: usize,
    pub formal_degree: DegreeBound,
}

/// An immutable circuit: topologically ordered nodes plus output ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit<F: Field> {
    ctx: F::Context,
    nvars: u32,
    yvar: Option<u32>,
    nodes: Vec<Node<F>>,
    outputs: Vec<NodeId>,
}

impl<F: Field> Circuit<F> {
    pub fn ctx(&self) -> &F::Context {
        &self.ctx
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    /// Index of the distinguished variable y, when one is designated.
    pub fn yvar(&self) -> Option<u32> {
        self.yvar
    }

    pub fn nodes(&self) -> &[Node<F>] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn single_output(&self) -> Result<NodeId, CircuitError> {
        if self.outputs.len() == 1 {
            Ok(self.outputs[0])
        } else {
            Err(CircuitError::NotSingleOutput)
        }
    }

    pub fn with_yvar(mut self, yvar: Option<u32>) -> Self {
        self.yvar = yvar;
        self
    }

    pub fn is_division_free(&self) -> bool {
        !self.nodes.iter().any(|n| matches!(n, Node::Div(_, _)))
    }

    pub fn stats(&self) -> CircuitStats {
        let mut edges = 0usize;
        let mut const_bits = 0u64;
        let mut depth = vec![0usize; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                Node::Var(_) => {}
                Node::Const(c) => const_bits += c.desc_bits(),
                Node::Add(l, r) | Node::Sub(l, r) | Node::Mul(l, r) | Node::Div(l, r) => {
                    edges += 2;
                    depth[i] = 1 + depth[*l as usize].max(depth[*r as usize]);
                }
            }
        }
        let max_depth = self
            .outputs
            .iter()
            .map(|&o| depth[o as usize])
            .max()
            .unwrap_or(0);
        CircuitStats {
            nodes: self.nodes.len(),
            edges,
            const_bits,
            size: edges as u64 + const_bits,
            depth: max_depth,
            formal_degree: degree::formal_degree(self),
        }
    }

    /// New circuit computing only `self.outputs()[index]`, with unreachable
    /// nodes dropped.
    pub fn restrict_to_output(&self, index: usize) -> Circuit<F> {
        let root = self.outputs[index];
        let mut reachable = vec![false; self.nodes.len()];
        reachable[root as usize] = true;
        for i in (0..=root as usize).rev() {
            if !reachable[i] {
                continue;
            }
            match &self.nodes[i] {
                Node::Var(_) | Node::Const(_) => {}
                Node::Add(l, r) | Node::Sub(l, r) | Node::Mul(l, r) | Node::Div(l, r) => {
                    reachable[*l as usize] = true;
                    reachable[*r as usize] = true;
                }
            }
        }
        let mut remap = vec![NodeId::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for i in 0..self.nodes.len() {
            if !reachable[i] {
                continue;
            }
            let remapped = match &self.nodes[i] {
                Node::Var(v) => Node::Var(*v),
                Node::Const(c) => Node::Const(c.clone()),
                Node::Add(l, r) => Node::Add(remap[*l as usize], remap[*r as usize]),
                Node::Sub(l, r) => Node::Sub(remap[*l as usize], remap[*r as usize]),
                Node::Mul(l, r) => Node::Mul(remap[*l as usize], remap[*r as usize]),
                Node::Div(l, r) => Node::Div(remap[*l as usize], remap[*r as usize]),
            };
            remap[i] = nodes.len() as NodeId;
            nodes.push(remapped);
        }
        Circuit {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            yvar: self.yvar,
            nodes,
            outputs: vec![remap[root as usize]],
        }
    }
}

/// Dedup key mirroring `Node`, with constants compared by value.
type NodeKey<F> = Node<F>;

/// Incremental construction with hash-consing of structurally identical
/// nodes. Ids come out dense and topologically ordered.
pub struct CircuitBuilder<F: Field> {
    ctx: F::Context,
    nvars: u32,
    yvar: Option<u32>,
    nodes: Vec<Node<F>>,
    dedup: BTreeMap<NodeKey<F>, NodeId>,
}

impl<F: Field> CircuitBuilder<F> {
    pub fn new(ctx: F::Context, nvars: u32) -> Self {
        CircuitBuilder {
            ctx,
            nvars,
            yvar: None,
            nodes: Vec::new(),
            dedup: BTreeMap::new(),
        }
    }

    pub fn with_yvar(mut self, yvar: Option<u32>) -> Self {
        self.yvar = yvar;
        self
    }

    pub fn ctx(&self) -> &F::Context {
        &self.ctx
    }

    pub fn nvars(&self) -> u32 {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node<F> {
        &self.nodes[id as usize]
    }

    fn intern(&mut self, node: Node<F>) -> NodeId {
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.dedup.insert(node.clone(), id);
        self.nodes.push(node);
        id
    }

    pub fn var(&mut self, index: u32) -> NodeId {
        debug_assert!(index < self.nvars, "variable index out of range");
        self.intern(Node::Var(index))
    }

    pub fn constant(&mut self, value: F) -> NodeId {
        self.intern(Node::Const(value))
    }

    pub fn rat(&mut self, r: &crate::field::Rational) -> NodeId {
        let v = F::from_rational(&self.ctx, r);
        self.constant(v)
    }

    pub fn int(&mut self, n: i64) -> NodeId {
        self.rat(&crate::field::Rational::from_int(n))
    }

    pub fn zero(&mut self) -> NodeId {
        let v = F::zero(&self.ctx);
        self.constant(v)
    }

    pub fn one(&mut self) -> NodeId {
        let v = F::one(&self.ctx);
        self.constant(v)
    }

    pub fn add(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::Add(l, r))
    }

    pub fn sub(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::Sub(l, r))
    }

    pub fn mul(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::Mul(l, r))
    }

    pub fn div(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::Div(l, r))
    }

    pub fn neg(&mut self, x: NodeId) -> NodeId {
        let zero = self.zero();
        self.sub(zero, x)
    }

    /// Balanced sum; the empty sum is the zero constant.
    pub fn add_many(&mut self, terms: &[NodeId]) -> NodeId {
        match terms.len() {
            0 => self.zero(),
            1 => terms[0],
            _ => {
                let mid = terms.len() / 2;
                let l = self.add_many(&terms[..mid]);
                let r = self.add_many(&terms[mid..]);
                self.add(l, r)
            }
        }
    }

    /// x^e by square-and-multiply; x^0 is the one constant.
    pub fn pow(&mut self, x: NodeId, e: u32) -> NodeId {
        if e == 0 {
            return self.one();
        }
        let mut acc = None;
        let mut base = x;
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base,
                    Some(a) => self.mul(a, base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = self.mul(base, base);
        }
        acc.unwrap()
    }

    /// Imports `source` wholesale, remapping variables through
    /// `var_images[i]` (builder node ids). Returns the image of every
    /// source node. Contexts must agree.
    pub fn import_subst(&mut self, source: &Circuit<F>, var_images: &[NodeId]) -> Vec<NodeId> {
        assert_eq!(
            var_images.len(),
            source.nvars as usize,
            "one image per source variable"
        );
        let mut map = Vec::with_capacity(source.nodes.len());
        for node in &source.nodes {
            let id = match node {
                Node::Var(v) => var_images[*v as usize],
                Node::Const(c) => self.constant(c.clone()),
                Node::Add(l, r) => {
                    let (l, r) = (map[*l as usize], map[*r as usize]);
                    self.add(l, r)
                }
                Node::Sub(l, r) => {
                    let (l, r) = (map[*l as usize], map[*r as usize]);
                    self.sub(l, r)
                }
                Node::Mul(l, r) => {
                    let (l, r) = (map[*l as usize], map[*r as usize]);
                    self.mul(l, r)
                }
                Node::Div(l, r) => {
                    let (l, r) = (map[*l as usize], map[*r as usize]);
                    self.div(l, r)
                }
            };
            map.push(id);
        }
        map
    }

    /// Imports `source` with variables mapped to the same-index variables.
    pub fn import(&mut self, source: &Circuit<F>) -> Vec<NodeId> {
        let images: Vec<NodeId> = (0..source.nvars).map(|i| self.var(i)).collect();
        self.import_subst(source, &images)
    }

    pub fn finish(self, outputs: Vec<NodeId>) -> Circuit<F> {
        for &o in &outputs {
            assert!((o as usize) < self.nodes.len(), "output id out of range");
        }
        Circuit {
            ctx: self.ctx,
            nvars: self.nvars,
            yvar: self.yvar,
            nodes: self.nodes,
            outputs,
        }
    }

    /// Snapshot of the current nodes as a circuit, leaving the builder
    /// usable. Handy for inspecting intermediate constructions.
    pub fn snapshot(&self, outputs: Vec<NodeId>) -> Circuit<F> {
        Circuit {
            ctx: self.ctx.clone(),
            nvars: self.nvars,
            yvar: self.yvar,
            nodes: self.nodes.clone(),
            outputs,
        }
    }

    pub fn clone_finish(&self, output: NodeId) -> Circuit<F> {
        self.snapshot(vec![output])
    }

    pub fn finish_single(self, output: NodeId) -> Circuit<F> {
        self.finish(vec![output])
    }
}

/// Builder pre-seeded from an existing circuit; returns the node map too.
pub fn builder_from<F: Field>(c: &Circuit<F>) -> (CircuitBuilder<F>, Vec<NodeId>) {
    let mut b = CircuitBuilder::new(c.ctx().clone(), c.nvars()).with_yvar(c.yvar());
    let map = b.import(c);
    (b, map)
}
