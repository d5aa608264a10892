//! The advisor-student genealogy graph.
//!
//! A directed acyclic multigraph-free graph: nodes are scholars, an edge
//! points from a mentor to a student. Students may have several advisors
//! (in-degree >= 2), so the structure is a DAG, not a tree. The graph is
//! immutable after construction; the repair passes return new graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scholar::{Scholar, ScholarId};

/// Accepted range for defense years at ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearBounds {
    pub min: i32,
    pub max: i32,
}

impl Default for YearBounds {
    fn default() -> Self {
        YearBounds {
            min: 1300,
            max: current_year(),
        }
    }
}

impl YearBounds {
    pub fn new(min: i32, max: i32) -> Self {
        YearBounds { min, max }
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.min..=self.max).contains(&year)
    }
}

/// Current civil year (UTC), from the system clock.
pub fn current_year() -> i32 {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    civil_year_from_days((secs / 86_400) as i64)
}

// Gregorian year for a day count since 1970-01-01 (Howard Hinnant's algorithm).
fn civil_year_from_days(days: i64) -> i32 {
    let z = days + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    (if m <= 2 { y + 1 } else { y }) as i32
}

/// A directed mentor -> student link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdvisorEdge {
    pub mentor: ScholarId,
    pub student: ScholarId,
}

/// Incremental, validating constructor for [`GenealogyGraph`].
#[derive(Debug)]
pub struct GraphBuilder {
    scholars: Vec<Scholar>,
    index: HashMap<ScholarId, usize>,
    /// (mentor, student) pairs in insertion order.
    edges: Vec<(ScholarId, ScholarId)>,
    bounds: YearBounds,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::with_bounds(YearBounds::default())
    }

    pub fn with_bounds(bounds: YearBounds) -> Self {
        GraphBuilder {
            scholars: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            bounds,
        }
    }

    pub fn add_scholar(&mut self, scholar: Scholar) -> Result<()> {
        if self.index.contains_key(&scholar.id) {
            return Err(Error::DuplicateId { id: scholar.id });
        }
        if let Some(year) = scholar.year {
            if !self.bounds.contains(year) {
                return Err(Error::YearOutOfBounds {
                    id: scholar.id,
                    year,
                    min: self.bounds.min,
                    max: self.bounds.max,
                });
            }
        }
        self.index.insert(scholar.id, self.scholars.len());
        self.scholars.push(scholar);
        Ok(())
    }

    pub fn add_edge(&mut self, mentor: ScholarId, student: ScholarId) -> Result<()> {
        if mentor == student {
            return Err(Error::SelfLoop { id: mentor });
        }
        self.edges.push((mentor, student));
        Ok(())
    }

    /// Validates referential integrity, edge uniqueness and acyclicity,
    /// then freezes the graph.
    pub fn build(self) -> Result<GenealogyGraph> {
        let n = self.scholars.len();
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut parents: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(self.edges.len());
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());

        for &(mentor, student) in &self.edges {
            let &mi = self
                .index
                .get(&mentor)
                .ok_or(Error::UnknownScholar { id: mentor })?;
            let &si = self
                .index
                .get(&student)
                .ok_or(Error::UnknownScholar { id: student })?;
            if !seen.insert((mi, si)) {
                return Err(Error::DuplicateEdge { mentor, student });
            }
            children[mi].push(si as u32);
            parents[si].push(mi as u32);
            edges.push((mi as u32, si as u32));
        }

        let graph = GenealogyGraph {
            scholars: self.scholars,
            index: self.index,
            children,
            parents,
            edges,
        };
        graph.check_acyclic()?;
        Ok(graph)
    }
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

/// The validated genealogy: scholars plus mentor -> student edges, with
/// both adjacency directions indexed by dense node position.
#[derive(Debug, Clone)]
pub struct GenealogyGraph {
    scholars: Vec<Scholar>,
    index: HashMap<ScholarId, usize>,
    children: Vec<Vec<u32>>,
    parents: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
}

impl GenealogyGraph {
    pub fn len(&self) -> usize {
        self.scholars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scholars.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn scholars(&self) -> &[Scholar] {
        &self.scholars
    }

    pub fn scholar(&self, pos: usize) -> &Scholar {
        &self.scholars[pos]
    }

    pub fn position(&self, id: ScholarId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn by_id(&self, id: ScholarId) -> Option<&Scholar> {
        self.position(id).map(|p| &self.scholars[p])
    }

    /// Student positions supervised by the scholar at `pos`.
    pub fn children_of(&self, pos: usize) -> &[u32] {
        &self.children[pos]
    }

    /// Mentor positions of the scholar at `pos`.
    pub fn parents_of(&self, pos: usize) -> &[u32] {
        &self.parents[pos]
    }

    /// Edges as (mentor position, student position), in insertion order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_endpoints(&self) -> impl Iterator<Item = (&Scholar, &Scholar)> + '_ {
        self.edges
            .iter()
            .map(move |&(m, s)| (&self.scholars[m as usize], &self.scholars[s as usize]))
    }

    /// A node with neither advisors nor students.
    pub fn is_isolated(&self, pos: usize) -> bool {
        self.children[pos].is_empty() && self.parents[pos].is_empty()
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.len()).filter(|&p| self.is_isolated(p)).count()
    }

    /// Positions in a topological order (mentors before students).
    /// The graph is validated acyclic, so this always covers every node.
    pub fn topo_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|p| self.parents[p].len()).collect();
        let mut queue: std::collections::VecDeque<usize> =
            (0..n).filter(|&p| indegree[p] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for &c in &self.children[p] {
                indegree[c as usize] -= 1;
                if indegree[c as usize] == 0 {
                    queue.push_back(c as usize);
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        order
    }

    fn check_acyclic(&self) -> Result<()> {
        let n = self.len();
        let mut indegree: Vec<usize> = (0..n).map(|p| self.parents[p].len()).collect();
        let mut queue: std::collections::VecDeque<usize> =
            (0..n).filter(|&p| indegree[p] == 0).collect();
        let mut seen = 0usize;
        while let Some(p) = queue.pop_front() {
            seen += 1;
            for &c in &self.children[p] {
                indegree[c as usize] -= 1;
                if indegree[c as usize] == 0 {
                    queue.push_back(c as usize);
                }
            }
        }
        if seen == n {
            return Ok(());
        }
        // Some node sits on a cycle; walk parent links among the leftovers
        // until a repeat to report one offending cycle.
        let start = (0..n).find(|&p| indegree[p] > 0).expect("leftover node");
        let mut path = vec![start];
        let mut at = start;
        let cycle = loop {
            let next = self.parents[at]
                .iter()
                .map(|&q| q as usize)
                .find(|&q| indegree[q] > 0)
                .expect("cyclic node has cyclic parent");
            if let Some(i) = path.iter().position(|&p| p == next) {
                let mut cyc: Vec<ScholarId> =
                    path[i..].iter().map(|&p| self.scholars[p].id).collect();
                cyc.reverse(); // follow mentor -> student direction
                cyc.push(cyc[0]);
                break cyc;
            }
            path.push(next);
            at = next;
        };
        Err(Error::Cycle { cycle })
    }

    /// Rebuild with the same structure but scholars transformed by `f`.
    /// Used by the repair passes; edges are untouched, so acyclicity and
    /// index layout are preserved.
    pub(crate) fn map_scholars(&self, f: impl FnMut(&Scholar) -> Scholar) -> GenealogyGraph {
        GenealogyGraph {
            scholars: self.scholars.iter().map(f).collect(),
            index: self.index.clone(),
            children: self.children.clone(),
            parents: self.parents.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Structural + payload equality, ignoring edge insertion order.
    pub fn same_corpus(&self, other: &GenealogyGraph) -> bool {
        if self.scholars != other.scholars {
            return false;
        }
        let key = |g: &GenealogyGraph| {
            let mut e: Vec<(ScholarId, ScholarId)> = g
                .edges
                .iter()
                .map(|&(m, s)| (g.scholars[m as usize].id, g.scholars[s as usize].id))
                .collect();
            e.sort_unstable();
            e
        };
        key(self) == key(other)
    }
}
