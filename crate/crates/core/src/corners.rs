//! Nice manifolds with corners as face-incidence records, plus builders for
//! surfaces with corners, products with an interval and vertex cuts.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::ValidityReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CornersError {
    #[error("boundary cycle {index} has length {length}; cycles must have length 0 or at least 2")]
    CycleLength { index: usize, length: usize },
    #[error("complex is not a product with an interval")]
    NotAProduct,
    #[error("vertex {0} is not a bottom vertex")]
    NotBottom(String),
    #[error("bottom vertex {0} is missing from the cut list")]
    MissingBottom(String),
    #[error("vertex {0} is listed twice")]
    DuplicateCutVertex(String),
    #[error("vertex {vertex} lies in {found} facets, expected {expected}")]
    NotSimple { vertex: String, found: usize, expected: usize },
    #[error("several faces with facets {facets:?} meet vertex {vertex}")]
    AmbiguousIncidence { vertex: String, facets: Vec<String> },
    #[error("generated id {0} collides with an existing id")]
    IdCollision(String),
    #[error("not a surface with corners: {0}")]
    NotASurface(String),
    #[error("complex is not nice: {0}")]
    NotNice(ValidityReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceRecord {
    pub id: String,
    #[serde(with = "crate::dec")]
    pub codim: usize,
    pub facet_set: BTreeSet<String>,
    #[serde(with = "crate::dec", default)]
    pub component_tag: u32,
}

impl FaceRecord {
    pub fn new<I, S>(id: impl Into<String>, facets: I, component_tag: u32) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let facet_set: BTreeSet<String> = facets.into_iter().map(Into::into).collect();
        FaceRecord { id: id.into(), codim: facet_set.len(), facet_set, component_tag }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Metadata {
    Surface {
        #[serde(with = "crate::dec")]
        genus: usize,
        #[serde(with = "crate::dec::seq")]
        boundary_cycles: Vec<usize>,
    },
    Product {
        bottom: String,
        top: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<Metadata>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornersComplex {
    #[serde(with = "crate::dec")]
    pub dim: usize,
    pub facets: Vec<String>,
    pub faces: Vec<FaceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl CornersComplex {
    pub fn record(&self, id: &str) -> Option<&FaceRecord> {
        self.faces.iter().find(|r| r.id == id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &FaceRecord> {
        self.faces.iter().filter(move |r| r.codim == self.dim)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().count()
    }

    pub fn has_facet(&self, id: &str) -> bool {
        self.facets.iter().any(|f| f == id)
    }

    pub fn genus(&self) -> usize {
        match &self.metadata {
            Some(Metadata::Surface { genus, .. }) => *genus,
            _ => 0,
        }
    }

    /// Faces of codim ≥ 1 whose facet set is a proper subset of `vertex`'s,
    /// one per subset, resolving duplicate facet sets by component tag.
    fn faces_through(&self, vertex: &FaceRecord) -> Result<Vec<&FaceRecord>, CornersError> {
        let mut by_set: BTreeMap<&BTreeSet<String>, Vec<&FaceRecord>> = BTreeMap::new();
        for r in &self.faces {
            if r.codim < vertex.codim && r.facet_set.is_subset(&vertex.facet_set) {
                by_set.entry(&r.facet_set).or_default().push(r);
            }
        }
        let mut out = Vec::new();
        for r in &self.faces {
            let Some(group) = by_set.get(&r.facet_set) else { continue };
            if group.len() == 1 {
                out.push(r);
                continue;
            }
            let tagged: Vec<_> =
                group.iter().filter(|g| g.component_tag == vertex.component_tag).collect();
            if tagged.len() != 1 {
                return Err(CornersError::AmbiguousIncidence {
                    vertex: vertex.id.clone(),
                    facets: r.facet_set.iter().cloned().collect(),
                });
            }
            if tagged[0].id == r.id {
                out.push(r);
            }
        }
        Ok(out)
    }
}

/// Every violated invariant of a nice manifold with corners.
pub fn validate_nice(c: &CornersComplex) -> ValidityReport {
    let mut report = ValidityReport::new();
    if c.dim == 0 {
        report.push("bad-dimension", "dimension must be positive", Vec::<String>::new());
    }
    let mut seen = HashSet::new();
    for f in &c.facets {
        if !seen.insert(f.as_str()) {
            report.push("duplicate-facet", format!("facet {f} listed twice"), [f.clone()]);
        }
    }
    let mut ids = HashSet::new();
    let mut components: HashMap<(&BTreeSet<String>, u32), &str> = HashMap::new();
    for r in &c.faces {
        if !ids.insert(r.id.as_str()) {
            report.push("duplicate-face", format!("face id {} used twice", r.id), [r.id.clone()]);
        }
        if r.codim == 0 || r.codim > c.dim {
            report.push(
                "bad-codim",
                format!("face {} has codim {} outside 1..={}", r.id, r.codim, c.dim),
                [r.id.clone()],
            );
        }
        if r.facet_set.len() != r.codim {
            report.push(
                "not-nice",
                format!(
                    "face {} has codim {} but lies in {} facets",
                    r.id,
                    r.codim,
                    r.facet_set.len()
                ),
                [r.id.clone()],
            );
        }
        for f in &r.facet_set {
            if !seen.contains(f.as_str()) {
                report.push(
                    "unknown-facet",
                    format!("face {} refers to unknown facet {f}", r.id),
                    [r.id.clone(), f.clone()],
                );
            }
        }
        if r.codim == 1 && (r.facet_set.len() != 1 || !r.facet_set.contains(&r.id)) {
            report.push(
                "facet-record",
                format!("codim-1 record {} must have facet set {{{}}}", r.id, r.id),
                [r.id.clone()],
            );
        }
        if let Some(prev) = components.insert((&r.facet_set, r.component_tag), &r.id) {
            report.push(
                "duplicate-component",
                format!("faces {prev} and {} share facets and component tag", r.id),
                [prev.to_string(), r.id.clone()],
            );
        }
    }
    for f in &c.facets {
        let n = c.faces.iter().filter(|r| r.codim == 1 && &r.id == f).count();
        if n != 1 {
            report.push("facet-record", format!("facet {f} needs exactly one codim-1 record"), [f.clone()]);
        }
    }
    report
}

fn circle_id(i: usize) -> String {
    format!("c{i}")
}

fn edge_id(i: usize, j: usize) -> String {
    format!("c{i}.e{j}")
}

fn vertex_id(i: usize, j: usize) -> String {
    format!("c{i}.v{j}")
}

/// Compact surface of `genus` with one boundary component per cycle length.
/// Length 0 is a circle, 2 an eye, ℓ ≥ 3 a polygon.
pub fn build_surface_with_corners(
    genus: usize,
    boundary_cycles: &[usize],
) -> Result<CornersComplex, CornersError> {
    let mut facets = Vec::new();
    let mut vertices = Vec::new();
    for (i, &len) in boundary_cycles.iter().enumerate() {
        match len {
            0 => facets.push(circle_id(i)),
            1 => return Err(CornersError::CycleLength { index: i, length: 1 }),
            _ => {
                for j in 0..len {
                    facets.push(edge_id(i, j));
                }
                // vertex j joins edge j and edge j+1; the two eye vertices
                // share a facet set and are told apart by tag
                for j in 0..len {
                    let tag = if len == 2 { j as u32 } else { 0 };
                    vertices.push(FaceRecord::new(
                        vertex_id(i, j),
                        [edge_id(i, j), edge_id(i, (j + 1) % len)],
                        tag,
                    ));
                }
            }
        }
    }
    let mut faces: Vec<FaceRecord> = facets.iter().map(|f| FaceRecord::new(f.clone(), [f.clone()], 0)).collect();
    faces.extend(vertices);
    Ok(CornersComplex {
        dim: 2,
        facets,
        faces,
        metadata: Some(Metadata::Surface { genus, boundary_cycles: boundary_cycles.to_vec() }),
    })
}

pub fn polygon(len: usize) -> Result<CornersComplex, CornersError> {
    build_surface_with_corners(0, &[len])
}

pub fn eye_shape() -> CornersComplex {
    build_surface_with_corners(0, &[2]).expect("length 2 is legal")
}

pub fn disc() -> CornersComplex {
    build_surface_with_corners(0, &[0]).expect("length 0 is legal")
}

/// The n-simplex: facets `f0..fn`, one face per proper nonempty subset.
pub fn simplex(n: usize) -> CornersComplex {
    let facets: Vec<String> = (0..=n).map(|i| format!("f{i}")).collect();
    let mut faces = Vec::new();
    for k in 1..=n {
        for subset in k_subsets(n + 1, k) {
            let names: Vec<&String> = subset.iter().map(|&i| &facets[i]).collect();
            let id = names.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(".");
            faces.push(FaceRecord::new(id, names.into_iter().cloned(), 0));
        }
    }
    CornersComplex { dim: n, facets, faces, metadata: None }
}

/// The n-cube: facets `x{i}-` and `x{i}+`.
pub fn cube(n: usize) -> CornersComplex {
    let facets: Vec<String> = (0..n).flat_map(|i| [format!("x{i}-"), format!("x{i}+")]).collect();
    let mut faces = Vec::new();
    for k in 1..=n {
        for coords in k_subsets(n, k) {
            for signs in 0..(1u32 << k) {
                let names: Vec<String> = coords
                    .iter()
                    .enumerate()
                    .map(|(b, &i)| facets[2 * i + ((signs >> b) & 1) as usize].clone())
                    .collect();
                faces.push(FaceRecord::new(names.join("."), names, 0));
            }
        }
    }
    CornersComplex { dim: n, facets, faces, metadata: None }
}

pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub const BOTTOM: &str = "bottom";
pub const TOP: &str = "top";

fn side(id: &str) -> String {
    format!("{id}*I")
}

fn at_end(id: &str, end: u8) -> String {
    format!("{id}*{end}")
}

/// `c × Δ¹`. Faces are `f*I`, then the bottom and top facets, then `f*0`
/// for every face, then `f*1`.
pub fn product_with_interval(c: &CornersComplex) -> CornersComplex {
    let facets: Vec<String> = c
        .facets
        .iter()
        .map(|f| side(f))
        .chain([BOTTOM.to_string(), TOP.to_string()])
        .collect();
    let sides = |r: &FaceRecord| r.facet_set.iter().map(|f| side(f)).collect::<Vec<_>>();
    let mut faces: Vec<FaceRecord> =
        c.faces.iter().map(|r| FaceRecord::new(side(&r.id), sides(r), r.component_tag)).collect();
    faces.push(FaceRecord::new(BOTTOM, [BOTTOM], 0));
    faces.push(FaceRecord::new(TOP, [TOP], 0));
    for (end, cap) in [(0, BOTTOM), (1, TOP)] {
        for r in &c.faces {
            let mut fs = sides(r);
            fs.push(cap.to_string());
            faces.push(FaceRecord::new(at_end(&r.id, end), fs, r.component_tag));
        }
    }
    CornersComplex {
        dim: c.dim + 1,
        facets,
        faces,
        metadata: Some(Metadata::Product {
            bottom: BOTTOM.into(),
            top: TOP.into(),
            base: c.metadata.clone().map(Box::new),
        }),
    }
}

/// A nice complex with a chosen family of disjoint facets containing every
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedManifold {
    pub base: CornersComplex,
    pub marked: Vec<String>,
    pub remaining: Vec<String>,
    /// Ids given to faces of the base when a marked facet is restricted to
    /// a standalone complex. Unlisted faces keep a default label.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub face_labels: BTreeMap<String, String>,
    /// Metadata attached to the restriction of a marked facet.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub piece_metadata: BTreeMap<String, Metadata>,
}

pub fn validate_marked(m: &MarkedManifold) -> ValidityReport {
    let mut report = validate_nice(&m.base);
    let marked: BTreeSet<&String> = m.marked.iter().collect();
    let remaining: BTreeSet<&String> = m.remaining.iter().collect();
    if marked.len() != m.marked.len() || remaining.len() != m.remaining.len() {
        report.push("marked-partition", "marked or remaining list repeats an id", Vec::<String>::new());
    }
    for id in marked.intersection(&remaining) {
        report.push("marked-partition", format!("{id} is both marked and remaining"), [(*id).clone()]);
    }
    let all: BTreeSet<&String> = m.base.facets.iter().collect();
    for id in marked.union(&remaining) {
        if !all.contains(id) {
            report.push("marked-partition", format!("{id} is not a facet"), [(*id).clone()]);
        }
    }
    for id in &all {
        if !marked.contains(id) && !remaining.contains(id) {
            report.push("marked-partition", format!("facet {id} is neither marked nor remaining"), [(*id).clone()]);
        }
    }
    for r in &m.base.faces {
        let hits: Vec<String> = r.facet_set.iter().filter(|f| marked.contains(f)).cloned().collect();
        if hits.len() > 1 {
            let mut ids = vec![r.id.clone()];
            ids.extend(hits.iter().cloned());
            report.push("marked-not-disjoint", format!("face {} meets two marked facets", r.id), ids);
        }
        if r.codim == m.base.dim && hits.is_empty() {
            report.push(
                "vertex-not-on-marked",
                format!("vertex {} lies on no marked facet", r.id),
                [r.id.clone()],
            );
        }
    }
    for id in m.piece_metadata.keys() {
        if !marked.contains(id) {
            report.push("marked-partition", format!("metadata for unmarked facet {id}"), [id.clone()]);
        }
    }
    report
}

fn cut_id(vertex: &str) -> String {
    format!("cut({vertex})")
}

/// Replaces each listed vertex by a simplex facet. Returns the new complex
/// and the new facet ids in input order.
fn cut_vertices(p: &CornersComplex, cut: &[String]) -> Result<(CornersComplex, Vec<String>), CornersError> {
    let report = validate_nice(p);
    if !report.is_valid() {
        return Err(CornersError::NotNice(report));
    }
    let mut ids: HashSet<String> = p.faces.iter().map(|r| r.id.clone()).collect();
    ids.extend(p.facets.iter().cloned());
    let mut new_facets = Vec::new();
    let mut new_faces = Vec::new();
    for v in cut {
        let vertex = p.record(v).expect("caller checked the vertex");
        if vertex.facet_set.len() != p.dim {
            return Err(CornersError::NotSimple { vertex: v.clone(), found: vertex.facet_set.len(), expected: p.dim });
        }
        let q = cut_id(v);
        let mut fresh = |id: String| -> Result<String, CornersError> {
            if ids.insert(id.clone()) { Ok(id) } else { Err(CornersError::IdCollision(id)) }
        };
        new_facets.push(fresh(q.clone())?);
        new_faces.push(FaceRecord::new(q.clone(), [q.clone()], 0));
        for r in p.faces_through(vertex)? {
            let mut fs: Vec<String> = r.facet_set.iter().cloned().collect();
            fs.push(q.clone());
            new_faces.push(FaceRecord::new(fresh(format!("{q}/{}", r.id))?, fs, 0));
        }
    }
    let mut facets = p.facets.clone();
    facets.extend(new_facets.iter().cloned());
    let mut faces: Vec<FaceRecord> = p.faces.iter().filter(|r| !cut.contains(&r.id)).cloned().collect();
    faces.extend(new_faces);
    Ok((CornersComplex { dim: p.dim, facets, faces, metadata: None }, new_facets))
}

/// Cuts the bottom vertices of a product `Q × Δ¹`. Marked facets are the
/// cuts in input order followed by the top facet.
pub fn vertex_cut_bottom(y: &CornersComplex, cut: &[String]) -> Result<MarkedManifold, CornersError> {
    let Some(Metadata::Product { bottom, top, base }) = &y.metadata else {
        return Err(CornersError::NotAProduct);
    };
    if !y.has_facet(bottom) || !y.has_facet(top) {
        return Err(CornersError::NotAProduct);
    }
    let bottom_vertices: Vec<&FaceRecord> = y.vertices().filter(|v| v.facet_set.contains(bottom)).collect();
    let mut seen = HashSet::new();
    for v in cut {
        if !seen.insert(v.as_str()) {
            return Err(CornersError::DuplicateCutVertex(v.clone()));
        }
        if !bottom_vertices.iter().any(|b| &b.id == v) {
            return Err(CornersError::NotBottom(v.clone()));
        }
    }
    if let Some(missing) = bottom_vertices.iter().find(|b| !seen.contains(b.id.as_str())) {
        return Err(CornersError::MissingBottom(missing.id.clone()));
    }
    let (cut_complex, mut marked) = cut_vertices(y, cut)?;
    marked.push(top.clone());
    let remaining = y.facets.iter().filter(|f| *f != top).cloned().collect();
    let suffix = "*1";
    let face_labels = y
        .faces
        .iter()
        .filter(|r| r.facet_set.contains(top) && &r.id != top)
        .map(|r| (r.id.clone(), r.id.strip_suffix(suffix).unwrap_or(&r.id).to_string()))
        .collect();
    let piece_metadata = base.iter().map(|md| (top.clone(), (**md).clone())).collect();
    Ok(MarkedManifold { base: cut_complex, marked, remaining, face_labels, piece_metadata })
}

/// Cuts every vertex of a simple complex.
pub fn vertex_cut(p: &CornersComplex) -> Result<MarkedManifold, CornersError> {
    for v in p.vertices() {
        if v.facet_set.len() != p.dim {
            return Err(CornersError::NotSimple { vertex: v.id.clone(), found: v.facet_set.len(), expected: p.dim });
        }
    }
    let cut: Vec<String> = p.vertices().map(|v| v.id.clone()).collect();
    let (base, marked) = cut_vertices(p, &cut)?;
    Ok(MarkedManifold {
        base,
        marked,
        remaining: p.facets.clone(),
        face_labels: BTreeMap::new(),
        piece_metadata: BTreeMap::new(),
    })
}

/// One boundary component of a surface with corners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    /// 0 for a circle, otherwise the number of edges.
    #[serde(with = "crate::dec")]
    pub length: usize,
    pub facets: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceProfile {
    pub genus: usize,
    pub components: Vec<BoundaryComponent>,
}

impl SurfaceProfile {
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.length).collect()
    }
}

/// Boundary components of a 2D complex, traced through facet–vertex
/// incidence, in order of first facet appearance.
pub fn surface_profile(c: &CornersComplex) -> Result<SurfaceProfile, CornersError> {
    if c.dim != 2 {
        return Err(CornersError::NotASurface(format!("dimension is {}", c.dim)));
    }
    let index: HashMap<&str, usize> = c.facets.iter().enumerate().map(|(i, f)| (f.as_str(), i)).collect();
    let mut parent: Vec<usize> = (0..c.facets.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut degree = vec![0usize; c.facets.len()];
    for v in c.vertices() {
        let ends: Vec<usize> = v.facet_set.iter().filter_map(|f| index.get(f.as_str()).copied()).collect();
        if ends.len() != 2 {
            return Err(CornersError::NotASurface(format!("vertex {} does not join two facets", v.id)));
        }
        degree[ends[0]] += 1;
        degree[ends[1]] += 1;
        let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[1]));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..c.facets.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut components = Vec::new();
    for (_, members) in groups {
        let length = if members.len() == 1 && degree[members[0]] == 0 { 0 } else { members.len() };
        if length > 0 && members.iter().any(|&i| degree[i] != 2) {
            return Err(CornersError::NotASurface(format!(
                "boundary component through {} is not a cycle",
                c.facets[members[0]]
            )));
        }
        components.push(BoundaryComponent { length, facets: members.iter().map(|&i| c.facets[i].clone()).collect() });
    }
    let genus = c.genus();
    if let Some(Metadata::Surface { boundary_cycles, .. }) = &c.metadata {
        let mut declared = boundary_cycles.clone();
        let mut found: Vec<usize> = components.iter().map(|b| b.length).collect();
        declared.sort_unstable();
        found.sort_unstable();
        if declared != found {
            return Err(CornersError::NotASurface(format!(
                "metadata lists cycles {boundary_cycles:?} but the faces give {found:?}"
            )));
        }
    }
    Ok(SurfaceProfile { genus, components })
}

/// Whether `c` is combinatorially an n-simplex: n+1 facets and every
/// n-subset of them meeting in exactly one vertex.
pub fn is_simplex(c: &CornersComplex) -> bool {
    if c.facets.len() != c.dim + 1 {
        return false;
    }
    if let Some(Metadata::Surface { genus, .. }) = &c.metadata {
        if *genus != 0 {
            return false;
        }
    }
    let sets: Vec<&BTreeSet<String>> = c.vertices().map(|v| &v.facet_set).collect();
    let distinct: BTreeSet<_> = sets.iter().collect();
    sets.len() == c.dim + 1 && distinct.len() == sets.len()
}
