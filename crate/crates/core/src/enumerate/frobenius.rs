//! Depth-first search over semigroups with a fixed Frobenius number.
//!
//! Positions `1..f` are decided in increasing order. The state carries the
//! members chosen so far and the mask of all pairwise sums `<= f` among
//! them. A position already in the sum mask is forced in; including a
//! position is refused when it would put `f` into the sum mask. Every leaf
//! is therefore a valid semigroup and dead branches die after one step.

use super::budget::{Budget, Meter};
use super::{run_tasks, EnumConfig};
use crate::error::{Error, Result};

/// Largest Frobenius number the bitmask search supports. Generators of a
/// semigroup reach `f + m <= 2f + 1`, which must stay inside a `u128`.
pub const MAX_FROBENIUS: u32 = 63;

/// Extra membership constraints on positions `1..f`.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Constraints {
    required: u128,
    forbidden: u128,
}

impl Constraints {
    pub(crate) fn none() -> Self {
        Self::default()
    }

    pub(crate) fn require(&mut self, x: u32) {
        self.required |= 1 << x;
    }

    pub(crate) fn forbid(&mut self, x: u32) {
        self.forbidden |= 1 << x;
    }
}

/// Receives every leaf of the search as `(f, members)`, where `members`
/// has bit 0 set and bits `1..f` describing `S ∩ [1, f - 1]`.
pub(crate) trait LeafSink: Send {
    fn leaf(&mut self, f: u32, members: u128);
    fn absorb(&mut self, other: Self);
}

#[derive(Clone, Copy, Debug)]
struct Node {
    pos: u32,
    members: u128,
    sums: u128,
}

struct Search {
    f: u32,
    frob_bit: u128,
    window: u128,
    c: Constraints,
}

enum Step {
    Leaf,
    Dead,
    Only(Node),
    Both(Node, Node),
}

impl Search {
    fn new(f: u32, c: Constraints) -> Self {
        Search {
            f,
            frob_bit: 1 << f,
            window: (1u128 << (f + 1)) - 1,
            c,
        }
    }

    fn root(&self) -> Node {
        Node {
            pos: 1,
            members: 1,
            sums: 0,
        }
    }

    #[inline]
    fn step(&self, node: Node) -> Step {
        let i = node.pos;
        if i >= self.f {
            return Step::Leaf;
        }
        let bit = 1u128 << i;
        let forced = (node.sums | self.c.required) & bit != 0;
        let skip = Node { pos: i + 1, ..node };
        if self.c.forbidden & bit != 0 {
            return if forced { Step::Dead } else { Step::Only(skip) };
        }
        let members = node.members | bit;
        let sums = node.sums | ((members << i) & self.window);
        let take = (sums & self.frob_bit == 0).then_some(Node {
            pos: i + 1,
            members,
            sums,
        });
        match (take, forced) {
            (Some(t), false) => Step::Both(t, skip),
            (Some(t), true) => Step::Only(t),
            (None, false) => Step::Only(skip),
            (None, true) => Step::Dead,
        }
    }

    fn walk<S: LeafSink>(&self, node: Node, sink: &mut S, meter: &mut Meter) -> Result<()> {
        meter.tick()?;
        match self.step(node) {
            Step::Leaf => sink.leaf(self.f, node.members),
            Step::Dead => {}
            Step::Only(next) => self.walk(next, sink, meter)?,
            Step::Both(take, skip) => {
                self.walk(take, sink, meter)?;
                self.walk(skip, sink, meter)?;
            }
        }
        Ok(())
    }

    /// Nodes reached after `depth` free branching decisions, in visiting order.
    fn frontier(&self, node: Node, depth: u32, out: &mut Vec<Node>) {
        if depth == 0 {
            out.push(node);
            return;
        }
        match self.step(node) {
            Step::Leaf => out.push(node),
            Step::Dead => {}
            Step::Only(next) => self.frontier(next, depth, out),
            Step::Both(take, skip) => {
                self.frontier(take, depth - 1, out);
                self.frontier(skip, depth - 1, out);
            }
        }
    }
}

/// Runs the search for Frobenius number `f`, folding leaves into sinks
/// built by `make`.
pub(crate) fn search<S, M>(f: u32, c: Constraints, cfg: &EnumConfig, make: M) -> Result<S>
where
    S: LeafSink,
    M: Fn() -> S + Sync,
{
    if f == 0 {
        return Err(Error::InvalidArgument(
            "Frobenius number must be at least 1".into(),
        ));
    }
    if f > MAX_FROBENIUS {
        return Err(Error::OutOfBudget {
            what: "Frobenius number",
            value: f as u64,
            max: MAX_FROBENIUS as u64,
        });
    }
    let budget = Budget::new(cfg);
    let mut sink = make();

    // Nothing to decide for f = 1; for f = 2 position 1 is never allowed.
    if f <= 2 {
        let mut meter = Meter::new(&budget);
        meter.tick()?;
        if c.required & 0b10 == 0 {
            sink.leaf(f, 1);
        }
        meter.finish()?;
        return Ok(sink);
    }

    let search = Search::new(f, c);
    if cfg.workers <= 1 {
        let mut meter = Meter::new(&budget);
        search.walk(search.root(), &mut sink, &mut meter)?;
        meter.finish()?;
        return Ok(sink);
    }

    let mut tasks = Vec::new();
    search.frontier(search.root(), cfg.split_depth, &mut tasks);
    let parts = run_tasks(cfg, tasks, |&node| {
        let mut part = make();
        let mut meter = Meter::new(&budget);
        search.walk(node, &mut part, &mut meter)?;
        meter.finish()?;
        Ok(part)
    })?;
    for part in parts {
        sink.absorb(part);
    }
    Ok(sink)
}
