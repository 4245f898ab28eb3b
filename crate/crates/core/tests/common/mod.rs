//! Shared helpers for the integration suites: corpus loading, an independent
//! re-implementation of the consistency rules (the oracle), single-edit
//! perturbations of the corpus tree, and random generators.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

use umlmap::diag::{Code, SourceSpan};
use umlmap::model::{resolve, Model};
use umlmap::parser::parse_document;
use umlmap::syntax::{
    ClassDiagramDecl, Ident, RawActorLink, RawAttribute, RawClass, RawExtendLink, RawField,
    RawOperation, RawParam, RawType, RawUsesLink, SyntaxTree, UseCaseDiagramDecl, Visibility,
};

pub const RMS_SOURCE: &str = include_str!("../../fixtures/rms.uml");
pub const STUDENT_FACULTY_SOURCE: &str = include_str!("../../fixtures/student_faculty.uml");

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn rms_tree() -> SyntaxTree {
    parse_document("rms.uml", RMS_SOURCE).expect("corpus parses")
}

pub fn rms_model() -> Model {
    resolve(&rms_tree()).expect("corpus resolves")
}

// ---------------------------------------------------------------------------
// Independent consistency-rule oracle
// ---------------------------------------------------------------------------

/// Straight-from-the-rules re-implementation of all consistency checks,
/// written separately from the production validator. Returns the sorted
/// multiset of finding codes.
pub fn oracle_codes(model: &Model) -> Vec<Code> {
    let mut codes = Vec::new();

    // Use-case tracing: count case-insensitive operation name matches.
    let mut realizer: HashMap<String, (String, String)> = HashMap::new();
    let mut trace_ok = true;
    for usecase in &model.usecases {
        let mut matches = Vec::new();
        for class in &model.classes {
            for op in &class.operations {
                if op.name.to_lowercase() == usecase.name.to_lowercase() {
                    matches.push((class.name.clone(), op.name.clone()));
                }
            }
        }
        match matches.len() {
            0 => {
                codes.push(Code::TraceUnmappedUsecase);
                trace_ok = false;
            }
            1 => {
                realizer.insert(usecase.name.clone(), matches.pop().unwrap());
            }
            _ => {
                codes.push(Code::TraceAmbiguousUsecase);
                trace_ok = false;
            }
        }
    }

    // Inheritance cycles: a node is cyclic iff walking parents returns to it.
    let parent_of: HashMap<&str, &str> = model
        .classes
        .iter()
        .filter_map(|c| c.parent.as_deref().map(|p| (c.name.as_str(), p)))
        .collect();
    let mut cyclic: BTreeSet<&str> = BTreeSet::new();
    for class in &model.classes {
        let mut cursor = class.name.as_str();
        for _ in 0..=model.classes.len() {
            match parent_of.get(cursor) {
                Some(next) => cursor = next,
                None => break,
            }
            if cursor == class.name {
                cyclic.insert(class.name.as_str());
                break;
            }
        }
    }
    // Single-parent graphs make cyclic nodes a union of disjoint simple
    // cycles; one finding per cycle.
    let mut unassigned = cyclic.clone();
    while let Some(&start) = unassigned.iter().next() {
        let mut cursor = start;
        loop {
            unassigned.remove(cursor);
            cursor = parent_of[cursor];
            if cursor == start {
                break;
            }
        }
        codes.push(Code::InheritanceCycle);
    }

    // Dangling endpoints.
    let class_names: BTreeSet<&str> = model.classes.iter().map(|c| c.name.as_str()).collect();
    let actor_names: BTreeSet<&str> = model.actors.iter().map(|a| a.name.as_str()).collect();
    let usecase_names: BTreeSet<&str> = model.usecases.iter().map(|u| u.name.as_str()).collect();
    for relation in &model.class_relations {
        for end in [&relation.source, &relation.target] {
            if !class_names.contains(end.as_str()) {
                codes.push(Code::DanglingRelation);
            }
        }
    }
    for class in &model.classes {
        if let Some(parent) = &class.parent {
            if !class_names.contains(parent.as_str()) {
                codes.push(Code::DanglingRelation);
            }
        }
    }
    for link in &model.usecase_links {
        let (source_ok, target_ok) = match link.kind {
            umlmap::model::UseCaseLinkKind::ActorAssociation => (
                actor_names.contains(link.source.as_str()),
                usecase_names.contains(link.target.as_str()),
            ),
            umlmap::model::UseCaseLinkKind::Extend => (
                usecase_names.contains(link.source.as_str()),
                usecase_names.contains(link.target.as_str()),
            ),
        };
        if !source_ok {
            codes.push(Code::DanglingRelation);
        }
        if !target_ok {
            codes.push(Code::DanglingRelation);
        }
    }

    // Call obligations, only defined when every use case traced.
    if trace_ok {
        for link in model.extend_links() {
            let (caller_class, _) = &realizer[&link.source];
            let (callee_class, _) = &realizer[&link.target];
            if caller_class == callee_class {
                continue;
            }
            let mut allowed: BTreeSet<&str> = BTreeSet::new();
            let mut cursor = Some(caller_class.as_str());
            while let Some(name) = cursor {
                if !allowed.insert(name) {
                    break;
                }
                cursor = parent_of.get(name).copied();
            }
            let satisfied = model.class_relations.iter().any(|r| {
                r.kind == umlmap::model::RelationKind::Uses
                    && allowed.contains(r.source.as_str())
                    && r.target == *callee_class
            });
            if !satisfied {
                codes.push(Code::ObligationUnsatisfied);
            }
        }
    }

    // Protected members without any subclass.
    let parented: BTreeSet<&str> = parent_of.values().copied().collect();
    for class in &model.classes {
        let protected = class
            .attributes
            .iter()
            .any(|a| a.visibility == Visibility::Protected)
            || class
                .operations
                .iter()
                .any(|o| o.visibility == Visibility::Protected);
        if protected && !parented.contains(class.name.as_str()) {
            codes.push(Code::ProtectedWithoutSubclass);
        }
    }

    // Duplicate members and shadowing of inherited accessible names.
    for class in &model.classes {
        let names: Vec<&str> = class
            .attributes
            .iter()
            .map(|a| a.name.as_str())
            .chain(class.operations.iter().map(|o| o.name.as_str()))
            .collect();
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for name in &names {
            *counts.entry(name).or_default() += 1;
        }
        for (_, count) in counts.iter().filter(|(_, &c)| c > 1) {
            for _ in 1..*count {
                codes.push(Code::DuplicateMember);
            }
        }

        let mut inherited: BTreeSet<&str> = BTreeSet::new();
        let mut walked: BTreeSet<&str> = BTreeSet::new();
        walked.insert(class.name.as_str());
        let mut cursor = parent_of.get(class.name.as_str()).copied();
        while let Some(ancestor) = cursor {
            if !walked.insert(ancestor) {
                break;
            }
            if let Some(node) = model.classes.iter().find(|c| c.name == ancestor) {
                for a in &node.attributes {
                    if a.visibility != Visibility::Private {
                        inherited.insert(a.name.as_str());
                    }
                }
                for o in &node.operations {
                    if o.visibility != Visibility::Private {
                        inherited.insert(o.name.as_str());
                    }
                }
            }
            cursor = parent_of.get(ancestor).copied();
        }
        let own_distinct: BTreeSet<&str> = names.iter().copied().collect();
        for name in own_distinct {
            if inherited.contains(name) {
                codes.push(Code::MemberShadowsInherited);
            }
        }
    }

    // Actors with no association link.
    for actor in &model.actors {
        let linked = model.usecase_links.iter().any(|l| {
            l.kind == umlmap::model::UseCaseLinkKind::ActorAssociation && l.source == actor.name
        });
        if !linked {
            codes.push(Code::ActorUnused);
        }
    }

    codes.sort();
    codes
}

// ---------------------------------------------------------------------------
// Single-edit perturbations of the corpus tree
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditKind {
    DeleteRelation,
    RenameOperation,
    AddInheritanceEdge,
    ChangeVisibility,
}

/// Apply one random single edit to a copy of the tree. The returned tree
/// always still resolves (edits never introduce unknown names).
pub fn perturb(tree: &SyntaxTree, rng: &mut StdRng) -> (SyntaxTree, EditKind) {
    let mut tree = tree.clone();
    let kind = match rng.random_range(0..4u8) {
        0 => {
            delete_relation(&mut tree, rng);
            EditKind::DeleteRelation
        }
        1 => {
            rename_operation(&mut tree, rng);
            EditKind::RenameOperation
        }
        2 => {
            add_inheritance_edge(&mut tree, rng);
            EditKind::AddInheritanceEdge
        }
        _ => {
            change_visibility(&mut tree, rng);
            EditKind::ChangeVisibility
        }
    };
    (tree, kind)
}

fn delete_relation(tree: &mut SyntaxTree, rng: &mut StdRng) {
    // Candidate relations: actor links, extend links, uses links, parent
    // clauses.
    let mut candidates: Vec<(usize, usize, u8)> = Vec::new();
    for (d, diagram) in tree.usecase_diagrams.iter().enumerate() {
        for i in 0..diagram.actor_links.len() {
            candidates.push((d, i, 0));
        }
        for i in 0..diagram.extend_links.len() {
            candidates.push((d, i, 1));
        }
    }
    for (d, diagram) in tree.class_diagrams.iter().enumerate() {
        for i in 0..diagram.uses.len() {
            candidates.push((d, i, 2));
        }
        for (i, class) in diagram.classes.iter().enumerate() {
            if class.parent.is_some() {
                candidates.push((d, i, 3));
            }
        }
    }
    if candidates.is_empty() {
        return;
    }
    let (d, i, tag) = candidates[rng.random_range(0..candidates.len())];
    match tag {
        0 => {
            tree.usecase_diagrams[d].actor_links.remove(i);
        }
        1 => {
            tree.usecase_diagrams[d].extend_links.remove(i);
        }
        2 => {
            tree.class_diagrams[d].uses.remove(i);
        }
        _ => tree.class_diagrams[d].classes[i].parent = None,
    }
}

fn rename_operation(tree: &mut SyntaxTree, rng: &mut StdRng) {
    let mut ops: Vec<(usize, usize, usize)> = Vec::new();
    for (d, diagram) in tree.class_diagrams.iter().enumerate() {
        for (c, class) in diagram.classes.iter().enumerate() {
            for o in 0..class.operations.len() {
                ops.push((d, c, o));
            }
        }
    }
    if ops.is_empty() {
        return;
    }
    let (d, c, o) = ops[rng.random_range(0..ops.len())];

    // Candidate new names stress different rules: a fresh name (unmapped use
    // case), an existing use-case name (ambiguity), or a member name from
    // another class (shadowing when inherited).
    let new_name = match rng.random_range(0..3u8) {
        0 => format!(
            "{}Renamed",
            tree.class_diagrams[d].classes[c].operations[o].name.text
        ),
        1 => {
            let usecases: Vec<String> = tree
                .usecase_diagrams
                .iter()
                .flat_map(|ud| ud.usecases.iter().map(|u| u.text.clone()))
                .collect();
            if usecases.is_empty() {
                "Orphan".to_string()
            } else {
                usecases[rng.random_range(0..usecases.len())].clone()
            }
        }
        _ => {
            let members: Vec<String> = tree
                .class_diagrams
                .iter()
                .enumerate()
                .flat_map(|(dd, diagram)| {
                    diagram.classes.iter().enumerate().flat_map(move |(cc, class)| {
                        let skip = dd == d && cc == c;
                        class
                            .attributes
                            .iter()
                            .map(|a| a.name.text.clone())
                            .chain(class.operations.iter().map(|op| op.name.text.clone()))
                            .filter(move |_| !skip)
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            if members.is_empty() {
                "Orphan".to_string()
            } else {
                members[rng.random_range(0..members.len())].clone()
            }
        }
    };
    tree.class_diagrams[d].classes[c].operations[o].name.text = new_name;
}

fn add_inheritance_edge(tree: &mut SyntaxTree, rng: &mut StdRng) {
    let class_names: Vec<Ident> = tree
        .class_diagrams
        .iter()
        .flat_map(|diagram| diagram.classes.iter().map(|c| c.name.clone()))
        .collect();
    if class_names.is_empty() {
        return;
    }
    let mut parentless: Vec<(usize, usize)> = Vec::new();
    for (d, diagram) in tree.class_diagrams.iter().enumerate() {
        for (c, class) in diagram.classes.iter().enumerate() {
            if class.parent.is_none() {
                parentless.push((d, c));
            }
        }
    }
    if parentless.is_empty() {
        return;
    }
    let (d, c) = parentless[rng.random_range(0..parentless.len())];
    // Any declared class may become the parent, including the class itself
    // (a one-node cycle).
    let parent = class_names[rng.random_range(0..class_names.len())].clone();
    tree.class_diagrams[d].classes[c].parent = Some(parent);
}

fn change_visibility(tree: &mut SyntaxTree, rng: &mut StdRng) {
    let mut members: Vec<(usize, usize, usize, bool)> = Vec::new();
    for (d, diagram) in tree.class_diagrams.iter().enumerate() {
        for (c, class) in diagram.classes.iter().enumerate() {
            for a in 0..class.attributes.len() {
                members.push((d, c, a, true));
            }
            for o in 0..class.operations.len() {
                members.push((d, c, o, false));
            }
        }
    }
    if members.is_empty() {
        return;
    }
    let (d, c, i, is_attr) = members[rng.random_range(0..members.len())];
    let current = if is_attr {
        tree.class_diagrams[d].classes[c].attributes[i].visibility
    } else {
        tree.class_diagrams[d].classes[c].operations[i].visibility
    };
    let options: Vec<Visibility> = [Visibility::Private, Visibility::Protected, Visibility::Public]
        .into_iter()
        .filter(|v| *v != current)
        .collect();
    let new_visibility = options[rng.random_range(0..options.len())];
    if is_attr {
        tree.class_diagrams[d].classes[c].attributes[i].visibility = new_visibility;
    } else {
        tree.class_diagrams[d].classes[c].operations[i].visibility = new_visibility;
    }
}

// ---------------------------------------------------------------------------
// Random well-formed documents (round-trip property)
// ---------------------------------------------------------------------------

fn ident() -> impl Strategy<Value = Ident> {
    "[A-Za-z][A-Za-z0-9_]{0,7}"
        .prop_filter("identifiers must not be keywords", |s| {
            !umlmap::lexer::KEYWORDS.contains(&s.as_str())
        })
        .prop_map(|text| Ident {
            text,
            span: SourceSpan::synthetic(),
        })
}

fn visibility() -> impl Strategy<Value = Visibility> {
    prop_oneof![
        Just(Visibility::Private),
        Just(Visibility::Protected),
        Just(Visibility::Public),
    ]
}

fn type_ref() -> impl Strategy<Value = RawType> {
    let leaf = prop_oneof![
        Just(RawType::Int),
        Just(RawType::Char),
        (2u32..500).prop_map(|capacity| RawType::FixedString {
            capacity,
            span: SourceSpan::synthetic(),
        }),
    ];
    leaf.prop_recursive(2, 12, 3, |inner| {
        (ident(), prop::collection::vec((ident(), inner), 0..3)).prop_map(|(name, fields)| {
            RawType::Record {
                name,
                fields: fields
                    .into_iter()
                    .map(|(field_name, ty)| RawField {
                        name: field_name,
                        ty,
                        span: SourceSpan::synthetic(),
                    })
                    .collect(),
                span: SourceSpan::synthetic(),
            }
        })
    })
}

fn attribute() -> impl Strategy<Value = RawAttribute> {
    (visibility(), ident(), type_ref()).prop_map(|(visibility, name, ty)| RawAttribute {
        visibility,
        name,
        ty,
        span: SourceSpan::synthetic(),
    })
}

fn operation() -> impl Strategy<Value = RawOperation> {
    (
        visibility(),
        ident(),
        prop::collection::vec((ident(), type_ref()), 0..3),
        prop::option::of(type_ref()),
    )
        .prop_map(|(visibility, name, params, return_type)| RawOperation {
            visibility,
            name,
            params: params
                .into_iter()
                .map(|(name, ty)| RawParam { name, ty })
                .collect(),
            return_type,
            span: SourceSpan::synthetic(),
        })
}

fn class() -> impl Strategy<Value = RawClass> {
    (
        ident(),
        prop::option::of(ident()),
        prop::collection::vec(attribute(), 0..4),
        prop::collection::vec(operation(), 0..4),
    )
        .prop_map(|(name, parent, attributes, operations)| RawClass {
            name,
            parent,
            attributes,
            operations,
            span: SourceSpan::synthetic(),
        })
}

fn usecase_diagram() -> impl Strategy<Value = UseCaseDiagramDecl> {
    (
        ident(),
        prop::collection::vec(ident(), 0..4),
        prop::collection::vec(ident(), 0..4),
        prop::collection::vec((ident(), ident()), 0..4),
        prop::collection::vec((ident(), ident()), 0..3),
    )
        .prop_map(|(name, actors, usecases, links, extends)| UseCaseDiagramDecl {
            name,
            actors,
            usecases,
            actor_links: links
                .into_iter()
                .map(|(actor, usecase)| RawActorLink {
                    actor,
                    usecase,
                    span: SourceSpan::synthetic(),
                })
                .collect(),
            extend_links: extends
                .into_iter()
                .map(|(source, target)| RawExtendLink {
                    source,
                    target,
                    span: SourceSpan::synthetic(),
                })
                .collect(),
            span: SourceSpan::synthetic(),
        })
}

fn class_diagram() -> impl Strategy<Value = ClassDiagramDecl> {
    (
        ident(),
        prop::collection::vec(class(), 0..4),
        prop::collection::vec((ident(), ident()), 0..3),
    )
        .prop_map(|(name, classes, uses)| ClassDiagramDecl {
            name,
            classes,
            uses: uses
                .into_iter()
                .map(|(source, target)| RawUsesLink {
                    source,
                    target,
                    span: SourceSpan::synthetic(),
                })
                .collect(),
            span: SourceSpan::synthetic(),
        })
}

/// A random syntactically well-formed document. Names may repeat and links
/// may dangle: the tree stays purely syntactic.
pub fn arb_document() -> impl Strategy<Value = SyntaxTree> {
    (
        prop::collection::vec(usecase_diagram(), 0..3),
        prop::collection::vec(class_diagram(), 0..3),
    )
        .prop_map(|(usecase_diagrams, class_diagrams)| SyntaxTree {
            usecase_diagrams,
            class_diagrams,
        })
}

// ---------------------------------------------------------------------------
// Random valid models (trace and codegen properties)
// ---------------------------------------------------------------------------

/// Source text of a model that parses, resolves, and validates with no
/// errors: unique class names, globally unique member names, forest-shaped
/// inheritance, and one use case per chosen operation.
pub fn arb_valid_model_text() -> impl Strategy<Value = String> {
    (
        prop::collection::vec(
            (
                any::<bool>(),        // has a parent (classes after the first)
                any::<u8>(),          // parent pick
                prop::collection::vec(0u8..3, 0..3), // attribute visibilities
                prop::collection::vec((0u8..3, any::<bool>()), 0..4), // op (vis, usecase?)
            ),
            1..5,
        ),
    )
        .prop_map(|(classes,)| {
            let vis = |v: u8| match v {
                0 => "-",
                1 => "#",
                _ => "+",
            };
            let mut body = String::new();
            let mut usecases = Vec::new();
            for (i, (has_parent, parent_pick, attrs, ops)) in classes.iter().enumerate() {
                if *has_parent && i > 0 {
                    let parent = (*parent_pick as usize) % i;
                    body.push_str(&format!("  class Cls{i} : Cls{parent} {{\n"));
                } else {
                    body.push_str(&format!("  class Cls{i} {{\n"));
                }
                for (j, v) in attrs.iter().enumerate() {
                    body.push_str(&format!("    {} Attr{i}_{j}: int;\n", vis(*v)));
                }
                for (k, (v, traced)) in ops.iter().enumerate() {
                    body.push_str(&format!("    {} Op{i}_{k}();\n", vis(*v)));
                    if *traced {
                        usecases.push(format!("Op{i}_{k}"));
                    }
                }
                body.push_str("  }\n");
            }
            let mut text = String::new();
            if !usecases.is_empty() {
                text.push_str("usecase-diagram Gen {\n");
                for u in &usecases {
                    text.push_str(&format!("  usecase {u};\n"));
                }
                text.push_str("}\n");
            }
            text.push_str("classdiagram Gen {\n");
            text.push_str(&body);
            text.push_str("}\n");
            text
        })
}
