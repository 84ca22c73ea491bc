//! The coupled derivation: both expressions of a question are grown
//! simultaneously over one table of numbered non-terminal instances.
//!
//! A structural rule expands an instance identically on both sides, sharing
//! the freshly created child instances. A law rule expands the left side
//! into one pattern and the right side into an equivalent one over the same
//! slot instances, so per-instance equivalence of the two sides is preserved
//! by congruence at every step.
//!
//! Generation consumes two hex digits per expansion: the first picks the
//! rule family, the second the rule. The difficulty controller shapes those
//! picks: a law-probability ramp, per-category quotas, a minimum expression
//! length, a literal boost once that length is reached, and the rule that a
//! Commutative or Associative application must be directly followed by an
//! Absorption, Idempotent, Double Negation or Identity on one of the
//! instances it created.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::DifficultyConfig;
use crate::laws::{
    law_table, select_rule, Category, CategoryCounts, LawRule, Pattern, Slot, StructuralKind,
    STRUCTURAL_RULES,
};
use crate::logic::BinOp;
use crate::seed::HexStream;

/// The law-probability ramp saturates here so a structural choice always
/// keeps a nonzero digit interval.
pub const LAW_PROBABILITY_CAP: f64 = 15.0 / 16.0;

/// Identifier of a non-terminal instance, unique within one derivation and
/// assigned in creation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InstanceId(u32);

impl InstanceId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.0)
    }
}

/// Which side of the pair a form belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Body of an expanded form: pattern structure whose leaves are child
/// instances or constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormNode {
    Ref(InstanceId),
    Const(bool),
    Not(Box<FormNode>),
    Binary(BinOp, Box<FormNode>, Box<FormNode>),
}

/// Per-side state of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeForm {
    /// Not yet expanded by any rule.
    Unexpanded,
    /// Closed as a literal; the variable is assigned later.
    Leaf,
    Expanded(FormNode),
}

/// One numbered non-terminal with its left-side and right-side form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub id: InstanceId,
    pub left_form: NodeForm,
    pub right_form: NodeForm,
}

impl Instance {
    pub fn form(&self, side: Side) -> &NodeForm {
        match side {
            Side::Left => &self.left_form,
            Side::Right => &self.right_form,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleFamily {
    Structural,
    Law,
}

/// One step of the derivation; the ordered trace doubles as the exercise's
/// model solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub family: RuleFamily,
    /// Order of the rule within its family's listing.
    pub rule: usize,
    pub rule_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<Category>,
    pub target_id: InstanceId,
    pub created_ids: Vec<InstanceId>,
}

/// A completed derivation: the instance table and the applied-rule trace.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedDerivation {
    instances: Vec<Instance>,
    trace: Vec<TraceEntry>,
    forced_closure: bool,
}

impl PairedDerivation {
    pub fn root(&self) -> InstanceId {
        InstanceId(0)
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, id: InstanceId) -> &Instance {
        &self.instances[id.index()]
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    /// True when the depth bound forced a literal closure somewhere, in which
    /// case the left side may legitimately stay below the minimum length.
    pub fn forced_closure(&self) -> bool {
        self.forced_closure
    }

    /// Leaf and constant occurrences reachable on one side; shared instances
    /// count once per occurrence.
    pub fn leaf_count(&self, side: Side) -> usize {
        count_side(&self.instances, InstanceId(0), side).leaves
    }

    /// Instances closed as literals, in id (creation) order.
    pub fn leaf_instances(&self) -> Vec<InstanceId> {
        self.instances
            .iter()
            .filter(|inst| inst.left_form == NodeForm::Leaf)
            .map(|inst| inst.id)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct SideCounts {
    leaves: usize,
    frontier: usize,
}

fn count_side(instances: &[Instance], id: InstanceId, side: Side) -> SideCounts {
    fn count_node(instances: &[Instance], node: &FormNode, side: Side, acc: &mut SideCounts) {
        match node {
            FormNode::Ref(child) => count_instance(instances, *child, side, acc),
            FormNode::Const(_) => acc.leaves += 1,
            FormNode::Not(c) => count_node(instances, c, side, acc),
            FormNode::Binary(_, l, r) => {
                count_node(instances, l, side, acc);
                count_node(instances, r, side, acc);
            }
        }
    }
    fn count_instance(instances: &[Instance], id: InstanceId, side: Side, acc: &mut SideCounts) {
        match instances[id.index()].form(side) {
            NodeForm::Unexpanded => acc.frontier += 1,
            NodeForm::Leaf => acc.leaves += 1,
            NodeForm::Expanded(node) => count_node(instances, node, side, acc),
        }
    }
    let mut acc = SideCounts::default();
    count_instance(instances, id, side, &mut acc);
    acc
}

/// Incremental constructor for a [`PairedDerivation`].
///
/// [`generate`] drives it from the digit stream; it can also be driven
/// directly to pin a specific rule script.
pub struct DerivationBuilder<'c> {
    config: &'c DifficultyConfig,
    instances: Vec<Instance>,
    depths: Vec<usize>,
    trace: Vec<TraceEntry>,
    p_law: f64,
    laws_applied: usize,
    quota_remaining: CategoryCounts,
    followup_hosts: Option<Vec<InstanceId>>,
    forced_closure: bool,
}

impl<'c> DerivationBuilder<'c> {
    pub fn new(config: &'c DifficultyConfig) -> Self {
        let mut builder = DerivationBuilder {
            config,
            instances: Vec::new(),
            depths: Vec::new(),
            trace: Vec::new(),
            p_law: config.p_law_init,
            laws_applied: 0,
            quota_remaining: CategoryCounts::new(
                config.quota_easy,
                config.quota_median,
                config.quota_hard,
            ),
            followup_hosts: None,
            forced_closure: false,
        };
        builder.new_instance(0);
        builder
    }

    pub fn root(&self) -> InstanceId {
        InstanceId(0)
    }

    pub fn depth(&self, id: InstanceId) -> usize {
        self.depths[id.index()]
    }

    pub fn is_unexpanded(&self, id: InstanceId) -> bool {
        self.instances[id.index()].left_form == NodeForm::Unexpanded
    }

    pub fn laws_applied(&self) -> usize {
        self.laws_applied
    }

    pub fn leaf_count(&self, side: Side) -> usize {
        count_side(&self.instances, InstanceId(0), side).leaves
    }

    fn new_instance(&mut self, depth: usize) -> InstanceId {
        let id = InstanceId(self.instances.len() as u32);
        self.instances.push(Instance {
            id,
            left_form: NodeForm::Unexpanded,
            right_form: NodeForm::Unexpanded,
        });
        self.depths.push(depth);
        id
    }

    /// Expands `target` with a structural rule: both sides receive the same
    /// form over the same fresh child instances.
    pub fn expand_structural(
        &mut self,
        target: InstanceId,
        kind: StructuralKind,
    ) -> Vec<InstanceId> {
        assert!(self.is_unexpanded(target), "{target} already expanded");
        let child_depth = self.depth(target) + 1;
        let (form, created) = match kind {
            StructuralKind::Literal => {
                if self.depth(target) >= self.config.max_depth {
                    self.forced_closure = true;
                }
                (None, Vec::new())
            }
            StructuralKind::Not => {
                let child = self.new_instance(child_depth);
                (
                    Some(FormNode::Not(Box::new(FormNode::Ref(child)))),
                    vec![child],
                )
            }
            StructuralKind::And | StructuralKind::Or | StructuralKind::Implies => {
                let op = match kind {
                    StructuralKind::And => BinOp::And,
                    StructuralKind::Or => BinOp::Or,
                    _ => BinOp::Implies,
                };
                let left = self.new_instance(child_depth);
                let right = self.new_instance(child_depth);
                (
                    Some(FormNode::Binary(
                        op,
                        Box::new(FormNode::Ref(left)),
                        Box::new(FormNode::Ref(right)),
                    )),
                    vec![left, right],
                )
            }
        };
        let instance = &mut self.instances[target.index()];
        match form {
            None => {
                instance.left_form = NodeForm::Leaf;
                instance.right_form = NodeForm::Leaf;
            }
            Some(node) => {
                instance.left_form = NodeForm::Expanded(node.clone());
                instance.right_form = NodeForm::Expanded(node);
            }
        }
        self.trace.push(TraceEntry {
            step: self.trace.len(),
            family: RuleFamily::Structural,
            rule: kind.order(),
            rule_name: kind.name().to_string(),
            category: None,
            target_id: target,
            created_ids: created.clone(),
        });
        created
    }

    /// Expands `target` with a law rule: one fresh instance per distinct
    /// slot, the left side instantiating `gamma1` and the right side
    /// `gamma2` over the same slot instances.
    pub fn apply_law(&mut self, target: InstanceId, rule: &LawRule) -> Vec<InstanceId> {
        assert!(self.is_unexpanded(target), "{target} already expanded");
        assert!(
            self.quota_remaining.get(rule.category()) > 0,
            "{} quota exhausted",
            rule.category()
        );
        assert!(
            self.laws_applied < self.config.max_laws,
            "law budget exhausted"
        );
        let child_depth = self.depth(target) + 1;
        let slots = rule.slots();
        let created: Vec<InstanceId> = slots.iter().map(|_| self.new_instance(child_depth)).collect();
        let slot_instance = |slot: Slot| {
            created[slots.iter().position(|s| *s == slot).expect("slot in rule")]
        };
        let left = instantiate_form(&rule.gamma1, &slot_instance);
        let right = instantiate_form(&rule.gamma2, &slot_instance);
        let instance = &mut self.instances[target.index()];
        instance.left_form = NodeForm::Expanded(left);
        instance.right_form = NodeForm::Expanded(right);

        *self.quota_remaining.get_mut(rule.category()) -= 1;
        self.laws_applied += 1;
        if rule.family.is_swap() {
            self.followup_hosts = Some(created.clone());
        } else if let Some(hosts) = &self.followup_hosts {
            if hosts.contains(&target) && rule.family.is_swap_followup() {
                self.followup_hosts = None;
            }
        }

        self.trace.push(TraceEntry {
            step: self.trace.len(),
            family: RuleFamily::Law,
            rule: rule.id,
            rule_name: rule.name().to_string(),
            category: Some(rule.category()),
            target_id: target,
            created_ids: created.clone(),
        });
        created
    }

    /// Decides the rule family for the next expansion of `target` and
    /// advances the law-probability ramp.
    ///
    /// A law is chosen only when the digit falls below `16 * p`, the law
    /// budget and some category quota remain, the depth bound leaves room,
    /// and any pending swap follow-up is satisfiable here. When `target` is
    /// the last unexpanded instance a pending swap created, the law family
    /// is forced so the follow-up cannot be starved.
    pub fn choose_family(&mut self, digit: u8, target: InstanceId) -> RuleFamily {
        let law_possible = self.laws_applied < self.config.max_laws
            && self.depth(target) < self.config.max_depth
            && !self.eligible_laws(target).is_empty();
        let forced = law_possible && self.is_forced_followup(target);
        if forced || (law_possible && f64::from(digit) < 16.0 * self.p_law) {
            self.p_law = self.config.p_law_init;
            RuleFamily::Law
        } else {
            self.p_law = (self.p_law + self.config.p_law_step).min(LAW_PROBABILITY_CAP);
            RuleFamily::Structural
        }
    }

    fn is_forced_followup(&self, target: InstanceId) -> bool {
        let Some(hosts) = &self.followup_hosts else {
            return false;
        };
        let mut live = hosts.iter().filter(|h| self.is_unexpanded(**h));
        live.next() == Some(&target) && live.next().is_none()
    }

    /// Law rules currently applicable at `target`, in selection order.
    ///
    /// Category quotas filter throughout. While a swap follow-up is pending,
    /// only follow-up families at the instances the swap created qualify.
    /// A swap itself qualifies only when a follow-up is guaranteed to fit
    /// afterwards: room in the law budget, a follow-up category with quota
    /// left once the swap consumes its own, and children shallow enough to
    /// host a law.
    pub fn eligible_laws(&self, target: InstanceId) -> Vec<&'static LawRule> {
        self.ordered_laws()
            .filter(|rule| {
                if self.quota_remaining.get(rule.category()) == 0 {
                    return false;
                }
                match &self.followup_hosts {
                    Some(hosts) if hosts.contains(&target) => rule.family.is_swap_followup(),
                    Some(_) => false,
                    None => !rule.family.is_swap() || self.swap_allowed(target),
                }
            })
            .collect()
    }

    fn swap_allowed(&self, target: InstanceId) -> bool {
        self.laws_applied + 2 <= self.config.max_laws
            && self.depth(target) + 1 < self.config.max_depth
            && (self.quota_remaining.easy > 0
                || self.quota_remaining.median > 0
                || self.quota_remaining.hard > 1)
    }

    fn ordered_laws(&self) -> impl Iterator<Item = &'static LawRule> + '_ {
        let table = law_table();
        (0..table.len()).map(move |i| match &self.config.law_order {
            Some(order) => &table[order[i]],
            None => &table[i],
        })
    }

    fn ordered_structural(&self) -> Vec<StructuralKind> {
        match &self.config.structural_order {
            Some(order) => order.iter().map(|&i| STRUCTURAL_RULES[i]).collect(),
            None => STRUCTURAL_RULES.to_vec(),
        }
    }

    /// Picks the structural rule for `target` from the digit.
    ///
    /// At the depth bound only the literal rule remains. While the left
    /// side cannot yet reach the minimum leaf count the literal rule is
    /// withheld, and once the count is reached its selection bucket widens
    /// by `p_literal_boost` with the remaining rules sharing the rest.
    pub fn pick_structural(&self, digit: u8, target: InstanceId) -> StructuralKind {
        if self.depth(target) >= self.config.max_depth {
            return StructuralKind::Literal;
        }
        let order = self.ordered_structural();
        let counts = count_side(&self.instances, InstanceId(0), Side::Left);
        let potential = counts.leaves + counts.frontier;
        if potential < self.config.min_leaf_count {
            let rest: Vec<StructuralKind> = order
                .iter()
                .copied()
                .filter(|k| *k != StructuralKind::Literal)
                .collect();
            return rest[select_rule(digit, rest.len())];
        }
        if counts.leaves >= self.config.min_leaf_count && self.config.p_literal_boost > 0.0 {
            let literal_share = 1.0 / order.len() as f64 + self.config.p_literal_boost;
            let threshold = (16.0 * literal_share).min(16.0);
            if f64::from(digit) < threshold {
                return StructuralKind::Literal;
            }
            let rest: Vec<StructuralKind> = order
                .iter()
                .copied()
                .filter(|k| *k != StructuralKind::Literal)
                .collect();
            let span = 16.0 - threshold;
            let idx = ((f64::from(digit) - threshold) * rest.len() as f64 / span) as usize;
            return rest[idx.min(rest.len() - 1)];
        }
        order[select_rule(digit, order.len())]
    }

    /// Seals the derivation. Panics if any instance is still unexpanded.
    pub fn finish(self) -> PairedDerivation {
        assert!(
            self.instances
                .iter()
                .all(|inst| inst.left_form != NodeForm::Unexpanded),
            "derivation incomplete"
        );
        PairedDerivation {
            instances: self.instances,
            trace: self.trace,
            forced_closure: self.forced_closure,
        }
    }
}

fn instantiate_form(pattern: &Pattern, slot_instance: &impl Fn(Slot) -> InstanceId) -> FormNode {
    match pattern {
        Pattern::Slot(s) => FormNode::Ref(slot_instance(*s)),
        Pattern::Const(v) => FormNode::Const(*v),
        Pattern::Not(c) => FormNode::Not(Box::new(instantiate_form(c, slot_instance))),
        Pattern::Binary(op, l, r) => FormNode::Binary(
            *op,
            Box::new(instantiate_form(l, slot_instance)),
            Box::new(instantiate_form(r, slot_instance)),
        ),
    }
}

/// Runs the full digit-driven derivation: a depth-first expansion where
/// every step consumes two digits (family, then rule).
pub fn generate(stream: &mut HexStream, config: &DifficultyConfig) -> PairedDerivation {
    let mut builder = DerivationBuilder::new(config);
    let root = builder.root();
    expand_from(&mut builder, root, stream);
    builder.finish()
}

fn expand_from(builder: &mut DerivationBuilder, target: InstanceId, stream: &mut HexStream) {
    let family_digit = stream.next_hex();
    let rule_digit = stream.next_hex();
    let created = match builder.choose_family(family_digit, target) {
        RuleFamily::Law => {
            let eligible = builder.eligible_laws(target);
            let rule = eligible[select_rule(rule_digit, eligible.len())];
            builder.apply_law(target, rule)
        }
        RuleFamily::Structural => {
            let kind = builder.pick_structural(rule_digit, target);
            builder.expand_structural(target, kind)
        }
    };
    for child in created {
        expand_from(builder, child, stream);
    }
}

/// A difficulty postcondition the trace or derivation fails to meet.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformanceViolation {
    #[error("trace uses {used} laws, exceeding max_laws {max}")]
    TooManyLaws { used: usize, max: usize },
    #[error("{category} law count {used} exceeds quota {quota}")]
    QuotaExceeded {
        category: Category,
        used: usize,
        quota: usize,
    },
    #[error("step {step}: {name} is the final law application")]
    SwapWithoutFollowup { step: usize, name: String },
    #[error("step {step}: swap followed by {next}, which is not a follow-up law")]
    BadFollowupLaw { step: usize, next: String },
    #[error("step {step}: follow-up targets {target}, which the swap did not create")]
    BadFollowupTarget { step: usize, target: InstanceId },
    #[error("left side has {leaves} leaves, below the minimum {min}")]
    TooShort { leaves: usize, min: usize },
}

/// Re-checks every difficulty postcondition of a completed derivation.
pub fn check_difficulty(
    deriv: &PairedDerivation,
    config: &DifficultyConfig,
) -> Result<(), ConformanceViolation> {
    let laws: Vec<&TraceEntry> = deriv
        .trace()
        .iter()
        .filter(|e| e.family == RuleFamily::Law)
        .collect();

    if laws.len() > config.max_laws {
        return Err(ConformanceViolation::TooManyLaws {
            used: laws.len(),
            max: config.max_laws,
        });
    }

    let quotas = CategoryCounts::new(config.quota_easy, config.quota_median, config.quota_hard);
    let mut used = CategoryCounts::default();
    for entry in &laws {
        let category = entry.category.expect("law entries carry a category");
        *used.get_mut(category) += 1;
        if used.get(category) > quotas.get(category) {
            return Err(ConformanceViolation::QuotaExceeded {
                category,
                used: used.get(category),
                quota: quotas.get(category),
            });
        }
    }

    for (i, entry) in laws.iter().enumerate() {
        if !law_table()[entry.rule].family.is_swap() {
            continue;
        }
        let Some(next) = laws.get(i + 1) else {
            return Err(ConformanceViolation::SwapWithoutFollowup {
                step: entry.step,
                name: entry.rule_name.clone(),
            });
        };
        if !law_table()[next.rule].family.is_swap_followup() {
            return Err(ConformanceViolation::BadFollowupLaw {
                step: entry.step,
                next: next.rule_name.clone(),
            });
        }
        if !entry.created_ids.contains(&next.target_id) {
            return Err(ConformanceViolation::BadFollowupTarget {
                step: entry.step,
                target: next.target_id,
            });
        }
    }

    let leaves = deriv.leaf_count(Side::Left);
    if leaves < config.min_leaf_count && !deriv.forced_closure() {
        return Err(ConformanceViolation::TooShort {
            leaves,
            min: config.min_leaf_count,
        });
    }
    Ok(())
}
