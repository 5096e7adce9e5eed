use crate::catalog::{Filter, ScopeClause, ScopeSpec, Selector};
use crate::model::{
    asset_paths, crosses_boundary, ArchModel, ElementKind, Flow, InspectionTarget, Sensitivity,
};

/// Targets selected by a scope, in first-selected order. Within a clause,
/// targets follow model declaration order.
pub fn select_scope(spec: &ScopeSpec, model: &ArchModel) -> Vec<InspectionTarget> {
    scope_members(spec, model)
        .into_iter()
        .map(|(t, _)| t)
        .collect()
}

/// Like [`select_scope`], also returning the labels of every clause that
/// selected each target.
pub fn scope_members<'s>(
    spec: &'s ScopeSpec,
    model: &ArchModel,
) -> Vec<(InspectionTarget, Vec<&'s str>)> {
    let mut out: Vec<(InspectionTarget, Vec<&str>)> = Vec::new();
    for clause in &spec.clauses {
        for target in select_clause(clause, model) {
            match out.iter_mut().find(|(t, _)| *t == target) {
                Some((_, labels)) => labels.push(&clause.label),
                None => out.push((target, vec![&clause.label])),
            }
        }
    }
    out
}

pub fn select_clause(clause: &ScopeClause, model: &ArchModel) -> Vec<InspectionTarget> {
    let keep = |t: &InspectionTarget| clause.filters.iter().all(|f| holds(f, t, model));
    let base: Vec<InspectionTarget> = match clause.selector {
        Selector::ExternalEntities => elements(model, ElementKind::ExternalEntity),
        Selector::Processes => elements(model, ElementKind::Process),
        Selector::DataStores => elements(model, ElementKind::DataStore),
        Selector::Flows => model
            .flows()
            .map(|f| InspectionTarget::Flow(f.id.clone()))
            .collect(),
        Selector::Sessions => model
            .sessions()
            .map(|s| InspectionTarget::Session(s.id.clone()))
            .collect(),
        Selector::AssetPaths => {
            let mut on_path = std::collections::HashSet::new();
            for asset in model.assets().filter(|a| a.sensitivity == Sensitivity::High) {
                for path in asset_paths(model, &asset.id) {
                    on_path.extend(path);
                }
            }
            model
                .flows()
                .filter(|f| on_path.contains(&f.id))
                .map(|f| InspectionTarget::Flow(f.id.clone()))
                .collect()
        }
    };
    base.into_iter().filter(keep).collect()
}

fn elements(model: &ArchModel, kind: ElementKind) -> Vec<InspectionTarget> {
    model
        .elements_of_kind(kind)
        .map(|e| InspectionTarget::Element(e.id.clone()))
        .collect()
}

fn holds(filter: &Filter, target: &InspectionTarget, model: &ArchModel) -> bool {
    match target {
        InspectionTarget::Element(id) => match filter {
            Filter::InteractsWithAssets(level) => model.interacts_with_assets(id, *level),
            Filter::EntryPoint => model.is_entry_point(id),
            Filter::Internal => !model.is_entry_point(id),
            Filter::HandlesCategory(c) => model.handles_category(id, *c),
            _ => false,
        },
        InspectionTarget::Flow(id) => match model.flow(id) {
            Some(flow) => flow_holds(filter, flow, model),
            None => false,
        },
        InspectionTarget::Session(id) => match (filter, model.session(id)) {
            (Filter::CrossingBoundary, Some(s)) => model.session_crosses_boundary(s),
            _ => false,
        },
    }
}

fn flow_holds(filter: &Filter, flow: &Flow, model: &ArchModel) -> bool {
    let kind_of = |id: &str| model.element(id).map(|e| e.kind);
    match filter {
        Filter::CrossingBoundary => crosses_boundary(model, flow),
        Filter::CarriesSensitivity(level) => model.max_sensitivity(flow).is_some_and(|s| s >= *level),
        Filter::TargetsStore => kind_of(&flow.target) == Some(ElementKind::DataStore),
        Filter::SourceKind(kinds) => kind_of(&flow.source).is_some_and(|k| kinds.contains(&k)),
        Filter::TargetKind(kinds) => kind_of(&flow.target).is_some_and(|k| kinds.contains(&k)),
        Filter::SourceInteractsWithAssets(level) => model.interacts_with_assets(&flow.source, *level),
        Filter::TargetInteractsWithAssets(level) => model.interacts_with_assets(&flow.target, *level),
        _ => false,
    }
}
