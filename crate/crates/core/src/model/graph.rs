//! Graph queries over a validated model.

use super::types::{ArchModel, AssetCategory, Element, ElementKind, Flow, Sensitivity, Session};

impl ArchModel {
    /// Trust zone of an element. Elements without a boundary share the
    /// implicit zone `None`.
    pub fn zone_of(&self, element: &str) -> Option<&str> {
        self.element(element).and_then(|e| e.boundary.as_deref())
    }

    fn different_zones(&self, a: &str, b: &str) -> bool {
        self.zone_of(a) != self.zone_of(b)
    }

    /// Highest sensitivity among the assets a flow carries.
    pub fn max_sensitivity(&self, flow: &Flow) -> Option<Sensitivity> {
        flow.carries
            .iter()
            .filter_map(|a| self.asset(a))
            .map(|a| a.sensitivity)
            .max()
    }

    pub fn flows_touching<'a>(&'a self, element: &'a str) -> impl Iterator<Item = &'a Flow> + 'a {
        self.flows()
            .filter(move |f| f.source == element || f.target == element)
    }

    /// The element is the source or target of a flow carrying an asset of
    /// at least `level`.
    pub fn interacts_with_assets(&self, element: &str, level: Sensitivity) -> bool {
        self.flows_touching(element)
            .any(|f| self.max_sensitivity(f).is_some_and(|s| s >= level))
    }

    /// The element is the source or target of a flow carrying an asset of
    /// the given category.
    pub fn handles_category(&self, element: &str, category: AssetCategory) -> bool {
        self.flows_touching(element).any(|f| {
            f.carries
                .iter()
                .filter_map(|a| self.asset(a))
                .any(|a| a.category == category)
        })
    }

    /// The element receives at least one flow from an external entity.
    pub fn is_entry_point(&self, element: &str) -> bool {
        self.flows().any(|f| {
            f.target == element
                && self
                    .element(&f.source)
                    .is_some_and(|s| s.kind == ElementKind::ExternalEntity)
        })
    }

    pub fn session_crosses_boundary(&self, session: &Session) -> bool {
        self.different_zones(&session.endpoint_a, &session.endpoint_b)
    }

    pub fn elements_of_kind(&self, kind: ElementKind) -> impl Iterator<Item = &Element> {
        self.elements().filter(move |e| e.kind == kind)
    }
}

/// True iff the flow's endpoints sit in different trust zones.
pub fn crosses_boundary(model: &ArchModel, flow: &Flow) -> bool {
    model.different_zones(&flow.source, &flow.target)
}

/// Every maximal trail (no flow used twice) whose flows all carry `asset`,
/// as flow-id sequences in lexicographic order.
///
/// A trail is maximal when no unused carrying flow extends it at either end.
/// Enumeration is exponential in the worst case; models are expected to be
/// small.
pub fn asset_paths(model: &ArchModel, asset: &str) -> Vec<Vec<String>> {
    let carrying: Vec<&Flow> = model
        .flows()
        .filter(|f| f.carries.iter().any(|a| a == asset))
        .collect();
    let mut paths = Vec::new();
    let mut used = vec![false; carrying.len()];
    let mut trail = Vec::new();
    for start in 0..carrying.len() {
        let can_prepend = carrying
            .iter()
            .enumerate()
            .any(|(j, g)| j != start && g.target == carrying[start].source);
        used[start] = true;
        trail.push(start);
        extend(&carrying, &mut used, &mut trail, can_prepend, &mut paths);
        trail.pop();
        used[start] = false;
    }
    paths.sort();
    paths.dedup();
    paths
}

fn extend(
    flows: &[&Flow],
    used: &mut [bool],
    trail: &mut Vec<usize>,
    start_extendable: bool,
    out: &mut Vec<Vec<String>>,
) {
    let last = flows[*trail.last().expect("non-empty trail")];
    let mut extended = false;
    for next in 0..flows.len() {
        if used[next] || flows[next].source != last.target {
            continue;
        }
        extended = true;
        used[next] = true;
        trail.push(next);
        extend(flows, used, trail, start_extendable, out);
        trail.pop();
        used[next] = false;
    }
    if extended {
        return;
    }
    // Backward maximality depends on which flows the trail consumed.
    let first = flows[trail[0]];
    let prependable = start_extendable
        && flows
            .iter()
            .enumerate()
            .any(|(j, g)| !used[j] && g.target == first.source);
    if !prependable {
        out.push(trail.iter().map(|&i| flows[i].id.clone()).collect());
    }
}
