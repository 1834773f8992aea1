//! Walk of the semigroup tree by genus.
//!
//! The root is the naturals. The children of `S` are `S \ {x}` for each
//! minimal generator `x` larger than the Frobenius number of `S`; every
//! semigroup of genus `g` appears exactly once at depth `g`.

use super::budget::{Budget, Meter};
use super::census::GenusCensus;
use super::{run_tasks, EnumConfig};
use crate::error::{Error, Result};
use crate::genus_analytics::TypeKA;
use crate::semigroup::Semigroup;

/// Largest genus the bitmask walk supports (`F + m <= 3g` must fit in 127 bits).
pub const MAX_GENUS: u32 = 40;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    /// Bit `i` set iff `i` is a member, for `i < 128`.
    pub(crate) members: u128,
    pub(crate) frobenius: i32,
    pub(crate) genus: u32,
}

impl Node {
    pub(crate) fn root() -> Self {
        Node {
            members: u128::MAX,
            frobenius: -1,
            genus: 0,
        }
    }

    pub(crate) fn multiplicity(&self) -> u32 {
        (self.members & !1).trailing_zeros()
    }

    /// Minimal generators greater than the Frobenius number, as a mask.
    fn effective_generators(&self) -> u128 {
        let m = self.multiplicity();
        let top = (self.frobenius + m as i32).max(m as i32) as u32;
        debug_assert!(top < 128);
        let nonzero = self.members & !1;
        let mut sums = 0u128;
        let mut rest = nonzero & ((1u128 << (top / 2 + 1)) - 1);
        while rest != 0 {
            let a = rest.trailing_zeros();
            rest &= rest - 1;
            sums |= nonzero << a;
        }
        let window = if top >= 127 {
            u128::MAX
        } else {
            (1u128 << (top + 1)) - 1
        };
        let above_frob = u128::MAX << (self.frobenius + 1) as u32;
        nonzero & !sums & window & above_frob
    }

    fn children(&self) -> impl Iterator<Item = Node> {
        let parent = *self;
        let mut gens = self.effective_generators();
        std::iter::from_fn(move || {
            if gens == 0 {
                return None;
            }
            let x = gens.trailing_zeros();
            gens &= gens - 1;
            Some(Node {
                members: parent.members & !(1u128 << x),
                frobenius: x as i32,
                genus: parent.genus + 1,
            })
        })
    }

    pub(crate) fn to_semigroup(self) -> Semigroup {
        if self.frobenius < 0 {
            Semigroup::naturals()
        } else {
            Semigroup::from_mask(self.frobenius as u32, self.members)
        }
    }

    /// `(k; A)` when the node has depth 3.
    pub(crate) fn type_ka(&self) -> Option<TypeKA> {
        let f = self.frobenius;
        let m = self.multiplicity() as i32;
        if f <= 2 * m || f >= 3 * m {
            return None;
        }
        let k = (f - 2 * m) as u32;
        let a = (self.members >> m) & ((1u128 << k) - 1);
        Some(TypeKA::new_unchecked(k, a as u64))
    }
}

fn walk<F: FnMut(&Node)>(node: Node, target: u32, meter: &mut Meter, leaf: &mut F) -> Result<()> {
    meter.tick()?;
    if node.genus == target {
        leaf(&node);
        return Ok(());
    }
    for child in node.children() {
        walk(child, target, meter, leaf)?;
    }
    Ok(())
}

fn frontier(node: Node, depth: u32, out: &mut Vec<Node>) {
    if depth == 0 {
        out.push(node);
        return;
    }
    for child in node.children() {
        frontier(child, depth - 1, out);
    }
}

/// Folds every genus-`g` node into sinks built by `make`; partial sinks are
/// combined in task order by `absorb`.
pub(crate) fn fold<A, M, L, B>(g: u32, cfg: &EnumConfig, make: M, leaf: L, absorb: B) -> Result<A>
where
    A: Send,
    M: Fn() -> A + Sync,
    L: Fn(&mut A, &Node) + Sync,
    B: Fn(&mut A, A),
{
    if g > MAX_GENUS {
        return Err(Error::OutOfBudget {
            what: "genus",
            value: g as u64,
            max: MAX_GENUS as u64,
        });
    }
    let budget = Budget::new(cfg);
    let mut acc = make();
    if cfg.workers <= 1 {
        let mut meter = Meter::new(&budget);
        walk(Node::root(), g, &mut meter, &mut |n| leaf(&mut acc, n))?;
        meter.finish()?;
        return Ok(acc);
    }
    let mut tasks = Vec::new();
    frontier(Node::root(), cfg.split_depth.min(g), &mut tasks);
    let parts = run_tasks(cfg, tasks, |&node| {
        let mut part = make();
        let mut meter = Meter::new(&budget);
        walk(node, g, &mut meter, &mut |n| leaf(&mut part, n))?;
        meter.finish()?;
        Ok(part)
    })?;
    for part in parts {
        absorb(&mut acc, part);
    }
    Ok(acc)
}

pub(crate) fn census(
    g: u32,
    cfg: &EnumConfig,
    visitor: Option<&(dyn Fn(&Semigroup) + Sync)>,
) -> Result<GenusCensus> {
    fold(
        g,
        cfg,
        || GenusCensus::empty(g),
        |c, node| {
            c.record(node.frobenius, node.multiplicity(), node.type_ka());
            if let Some(v) = visitor {
                v(&node.to_semigroup());
            }
        },
        |c, part| c.merge(&part),
    )
}
