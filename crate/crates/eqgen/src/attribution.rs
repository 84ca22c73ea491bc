//! Expression construction: assigns pool variables to the literal leaves of
//! a completed derivation and reads both propositions off the instance graph
//! in one memoized depth-first pass per side, so a shared instance is
//! computed once and reused wherever it is referenced.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::derivation::{FormNode, InstanceId, NodeForm, PairedDerivation, Side};
use crate::logic::{render, Proposition, Syntax, ATOM_BINDING_POWER};
use crate::seed::HexStream;

/// The variable pool; `pool_size` selects a prefix of it.
pub const VARIABLE_POOL: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// A synthesized attribute cell: the expression a node produces and the
/// binding power of its last-performed operator (atoms sit at infinity).
#[derive(Debug, Clone, PartialEq)]
pub struct AttrCell {
    pub exp: Proposition,
    pub pre: u8,
}

impl AttrCell {
    pub fn of(exp: Proposition) -> Self {
        let pre = exp.binding_power();
        AttrCell { exp, pre }
    }

    pub fn is_atom(&self) -> bool {
        self.pre == ATOM_BINDING_POWER
    }
}

/// Variables chosen for the leaf instances, keyed by instance id.
pub type LeafAssignment = BTreeMap<InstanceId, &'static str>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttributionError {
    #[error("leaf {0} has no assigned variable")]
    UnassignedLeaf(InstanceId),
    #[error("instance {0} is unexpanded")]
    Incomplete(InstanceId),
}

/// Draws one pool variable per leaf instance, in instance-id (creation)
/// order, from the digit stream: `pool[digit mod pool_size]`.
///
/// A leaf shared by both sides is a single instance and receives a single
/// draw, so it renders as the same variable on both sides.
pub fn assign_literals(
    deriv: &PairedDerivation,
    stream: &mut HexStream,
    pool_size: usize,
) -> LeafAssignment {
    assert!(
        (1..=VARIABLE_POOL.len()).contains(&pool_size),
        "pool_size out of range"
    );
    deriv
        .leaf_instances()
        .into_iter()
        .map(|id| (id, VARIABLE_POOL[stream.next_hex() as usize % pool_size]))
        .collect()
}

/// The two extracted propositions with their Unicode rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedPair {
    pub lhs: Proposition,
    pub rhs: Proposition,
    pub lhs_text: String,
    pub rhs_text: String,
}

/// Reads the left and right propositions off the derivation.
///
/// Each side is one depth-first pass with per-instance memoization, so the
/// cost is linear in the instance count and a shared subexpression yields
/// the identical `Proposition` value at every occurrence.
pub fn extract_pair(
    deriv: &PairedDerivation,
    assignment: &LeafAssignment,
) -> Result<RenderedPair, AttributionError> {
    let lhs = side_proposition(deriv, Side::Left, assignment)?;
    let rhs = side_proposition(deriv, Side::Right, assignment)?;
    let lhs_text = render(&lhs, Syntax::Unicode);
    let rhs_text = render(&rhs, Syntax::Unicode);
    Ok(RenderedPair {
        lhs,
        rhs,
        lhs_text,
        rhs_text,
    })
}

fn side_proposition(
    deriv: &PairedDerivation,
    side: Side,
    assignment: &LeafAssignment,
) -> Result<Proposition, AttributionError> {
    let mut memo: HashMap<InstanceId, Proposition> = HashMap::new();
    instance_proposition(deriv, deriv.root(), side, assignment, &mut memo)
}

fn instance_proposition(
    deriv: &PairedDerivation,
    id: InstanceId,
    side: Side,
    assignment: &LeafAssignment,
    memo: &mut HashMap<InstanceId, Proposition>,
) -> Result<Proposition, AttributionError> {
    if let Some(done) = memo.get(&id) {
        return Ok(done.clone());
    }
    let prop = match deriv.instance(id).form(side) {
        NodeForm::Unexpanded => return Err(AttributionError::Incomplete(id)),
        NodeForm::Leaf => {
            let var = assignment
                .get(&id)
                .ok_or(AttributionError::UnassignedLeaf(id))?;
            Proposition::var(*var)
        }
        NodeForm::Expanded(node) => node_proposition(deriv, node, side, assignment, memo)?,
    };
    memo.insert(id, prop.clone());
    Ok(prop)
}

fn node_proposition(
    deriv: &PairedDerivation,
    node: &FormNode,
    side: Side,
    assignment: &LeafAssignment,
    memo: &mut HashMap<InstanceId, Proposition>,
) -> Result<Proposition, AttributionError> {
    Ok(match node {
        FormNode::Ref(child) => instance_proposition(deriv, *child, side, assignment, memo)?,
        FormNode::Const(v) => Proposition::Const(*v),
        FormNode::Not(c) => {
            Proposition::not(node_proposition(deriv, c, side, assignment, memo)?)
        }
        FormNode::Binary(op, l, r) => Proposition::Binary(
            *op,
            Box::new(node_proposition(deriv, l, side, assignment, memo)?),
            Box::new(node_proposition(deriv, r, side, assignment, memo)?),
        ),
    })
}
