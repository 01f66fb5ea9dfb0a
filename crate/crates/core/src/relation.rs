//! Finite multiway relations: axes with labeled atoms, sorted tuple sets,
//! slicing/projection/rebracketing, filtration values, and the two input
//! formats (a line-oriented text format and JSON).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;

use crate::{Error, Result};

/// A named finite index set; atoms are addressed `0..len()` and carry labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    pub label: String,
    pub elements: Vec<String>,
}

impl IndexSet {
    pub fn numbered(label: impl Into<String>, n: usize) -> Self {
        IndexSet { label: label.into(), elements: (0..n).map(|i| i.to_string()).collect() }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Default axis names: I, J, K, L, then I5, I6, …
pub fn default_axis_label(k: usize) -> String {
    match k {
        0 => "I".into(),
        1 => "J".into(),
        2 => "K".into(),
        3 => "L".into(),
        _ => format!("I{}", k + 1),
    }
}

pub type Tuple = Vec<u32>;

fn fmt_tuple(t: &[u32]) -> String {
    let mut s = String::from("(");
    for (i, x) in t.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{x}");
    }
    s.push(')');
    s
}

fn check_tuple(axes: &[IndexSet], t: &[u32]) -> Result<()> {
    if t.len() != axes.len() {
        return Err(Error::ArityMismatch { expected: axes.len(), got: t.len() });
    }
    for (k, (&a, axis)) in t.iter().zip(axes).enumerate() {
        if a as usize >= axis.len() {
            return Err(Error::AtomOutOfRange { axis: k, atom: a, size: axis.len() });
        }
    }
    Ok(())
}

/// A finite multiway relation `R ⊆ I₁ × … × I_m`, kept as a sorted,
/// duplicate-free tuple list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    axes: Vec<IndexSet>,
    tuples: Vec<Tuple>,
}

impl Relation {
    pub fn new(axes: Vec<IndexSet>, mut tuples: Vec<Tuple>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Shape("a relation needs at least one axis".into()));
        }
        for t in &tuples {
            check_tuple(&axes, t)?;
        }
        tuples.sort_unstable();
        if let Some(w) = tuples.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateTuple(fmt_tuple(&w[0])));
        }
        Ok(Relation { axes, tuples })
    }

    /// Axes named with the defaults and numbered atoms.
    pub fn from_dims(dims: &[usize], tuples: Vec<Tuple>) -> Result<Self> {
        let axes = dims
            .iter()
            .enumerate()
            .map(|(k, &n)| IndexSet::numbered(default_axis_label(k), n))
            .collect();
        Relation::new(axes, tuples)
    }

    pub fn axes(&self) -> &[IndexSet] {
        &self.axes
    }

    pub fn axis(&self, k: usize) -> &IndexSet {
        &self.axes[k]
    }

    pub fn axis_by_label(&self, label: &str) -> Option<usize> {
        self.axes.iter().position(|a| a.label == label)
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(IndexSet::len).collect()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[u32]) -> bool {
        self.tuples.binary_search_by(|probe| probe.as_slice().cmp(t)).is_ok()
    }

    /// Fix axis `k` to `atom` and drop that coordinate: the slice relation
    /// on the remaining axes.
    pub fn slice(&self, k: usize, atom: u32) -> Result<Relation> {
        self.check_axis(k)?;
        if self.arity() == 1 {
            return Err(Error::Shape("cannot slice a unary relation down to arity 0".into()));
        }
        if atom as usize >= self.axes[k].len() {
            return Err(Error::AtomOutOfRange { axis: k, atom, size: self.axes[k].len() });
        }
        let axes: Vec<IndexSet> =
            self.axes.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, a)| a.clone()).collect();
        let tuples = self
            .tuples
            .iter()
            .filter(|t| t[k] == atom)
            .map(|t| drop_coord(t, k))
            .collect();
        Relation::new(axes, tuples)
    }

    /// Forget the listed axes, deduplicating the images.
    pub fn project(&self, drop: &[usize]) -> Result<Relation> {
        for &k in drop {
            self.check_axis(k)?;
        }
        let dropped: BTreeSet<usize> = drop.iter().copied().collect();
        if dropped.len() == self.arity() {
            return Err(Error::Shape("cannot project away every axis".into()));
        }
        let axes: Vec<IndexSet> = self
            .axes
            .iter()
            .enumerate()
            .filter(|(i, _)| !dropped.contains(i))
            .map(|(_, a)| a.clone())
            .collect();
        let images: BTreeSet<Tuple> = self
            .tuples
            .iter()
            .map(|t| {
                t.iter().enumerate().filter(|(i, _)| !dropped.contains(i)).map(|(_, &x)| x).collect()
            })
            .collect();
        Relation::new(axes, images.into_iter().collect())
    }

    /// View `R ⊆ I₁×…×I_m` as a binary relation between axis `keep` and the
    /// product of the remaining axes (in their original order). Atoms of the
    /// product axis are numbered lexicographically by the remaining
    /// coordinates.
    pub fn rebracket(&self, keep: usize) -> Result<Relation> {
        self.check_axis(keep)?;
        if self.arity() < 2 {
            return Err(Error::Shape("rebracket needs arity ≥ 2".into()));
        }
        let rest: Vec<usize> = (0..self.arity()).filter(|&i| i != keep).collect();
        let mut elements = Vec::new();
        let rest_dims: Vec<usize> = rest.iter().map(|&i| self.axes[i].len()).collect();
        for combo in lex_tuples(&rest_dims) {
            let mut s = String::from("(");
            for (pos, &i) in rest.iter().enumerate() {
                if pos > 0 {
                    s.push(',');
                }
                s.push_str(&self.axes[i].elements[combo[pos] as usize]);
            }
            s.push(')');
            elements.push(s);
        }
        let product_label =
            rest.iter().map(|&i| self.axes[i].label.clone()).collect::<Vec<_>>().join("x");
        let product_axis = IndexSet { label: product_label, elements };
        let tuples = self
            .tuples
            .iter()
            .map(|t| {
                let mut flat = 0u32;
                for (pos, &i) in rest.iter().enumerate() {
                    flat = flat * rest_dims[pos] as u32 + t[i];
                }
                vec![t[keep], flat]
            })
            .collect();
        Relation::new(vec![self.axes[keep].clone(), product_axis], tuples)
    }

    /// Product relation on the concatenated axes.
    pub fn product(&self, other: &Relation) -> Result<Relation> {
        let mut axes = self.axes.clone();
        for (i, a) in other.axes.iter().enumerate() {
            let mut a = a.clone();
            if axes.iter().any(|b| b.label == a.label) {
                a.label = format!("{}'{}", a.label, i);
            }
            axes.push(a);
        }
        let mut tuples = Vec::with_capacity(self.len() * other.len());
        for s in &self.tuples {
            for t in &other.tuples {
                let mut st = s.clone();
                st.extend_from_slice(t);
                tuples.push(st);
            }
        }
        Relation::new(axes, tuples)
    }

    fn check_axis(&self, k: usize) -> Result<()> {
        if k >= self.arity() {
            return Err(Error::AxisOutOfRange { axis: k, arity: self.arity() });
        }
        Ok(())
    }

    /// Text-format serialization (see [`parse_relation`]).
    pub fn to_text(&self) -> String {
        relation_text(&self.axes, self.tuples.iter().map(|t| (t.as_slice(), None)))
    }
}

fn drop_coord(t: &[u32], k: usize) -> Tuple {
    t.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect()
}

/// All tuples over the given dimensions in lexicographic order.
pub fn lex_tuples(dims: &[usize]) -> Vec<Tuple> {
    let mut out = vec![Tuple::new()];
    for &n in dims {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for x in 0..n as u32 {
                let mut t = t.clone();
                t.push(x);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// A relation with a real filtration value on every present tuple; absent
/// tuples never appear in any sublevel.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredRelation {
    axes: Vec<IndexSet>,
    entries: Vec<(Tuple, f64)>,
}

impl FilteredRelation {
    pub fn new(axes: Vec<IndexSet>, mut entries: Vec<(Tuple, f64)>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::Shape("a relation needs at least one axis".into()));
        }
        for (t, v) in &entries {
            check_tuple(&axes, t)?;
            if !v.is_finite() {
                return Err(Error::NotMonotone(format!("non-finite value on tuple {}", fmt_tuple(t))));
            }
        }
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateTuple(fmt_tuple(&w[0].0)));
        }
        Ok(FilteredRelation { axes, entries })
    }

    pub fn axes(&self) -> &[IndexSet] {
        &self.axes
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn entries(&self) -> &[(Tuple, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, t: &[u32]) -> Option<f64> {
        self.entries
            .binary_search_by(|probe| probe.0.as_slice().cmp(t))
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// The relation of all present tuples (the `t → ∞` limit).
    pub fn support(&self) -> Relation {
        Relation {
            axes: self.axes.clone(),
            tuples: self.entries.iter().map(|(t, _)| t.clone()).collect(),
        }
    }

    /// Tuples with value ≤ `t`.
    pub fn sublevel(&self, t: f64) -> Relation {
        Relation {
            axes: self.axes.clone(),
            tuples: self.entries.iter().filter(|(_, v)| *v <= t).map(|(tp, _)| tp.clone()).collect(),
        }
    }

    /// Sorted distinct filtration values.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.entries.iter().map(|(_, v)| *v).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| a == b);
        vals
    }

    pub fn to_text(&self) -> String {
        relation_text(&self.axes, self.entries.iter().map(|(t, v)| (t.as_slice(), Some(*v))))
    }
}

fn relation_text<'a>(axes: &[IndexSet], rows: impl Iterator<Item = (&'a [u32], Option<f64>)>) -> String {
    let mut s = String::from("dims");
    for a in axes {
        let _ = write!(s, " {}", a.len());
    }
    s.push('\n');
    s.push_str("axes");
    for a in axes {
        let _ = write!(s, " {}", a.label);
    }
    s.push('\n');
    for (k, a) in axes.iter().enumerate() {
        let default: Vec<String> = (0..a.len()).map(|i| i.to_string()).collect();
        if a.elements != default {
            let _ = write!(s, "labels {k}");
            for e in &a.elements {
                let _ = write!(s, " {e}");
            }
            s.push('\n');
        }
    }
    for (t, v) in rows {
        let mut first = true;
        for x in t {
            if !first {
                s.push(' ');
            }
            let _ = write!(s, "{x}");
            first = false;
        }
        if let Some(v) = v {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

/// Either form a relation file may hold.
#[derive(Clone, Debug)]
pub enum ParsedRelation {
    Plain(Relation),
    Filtered(FilteredRelation),
}

impl ParsedRelation {
    /// The underlying unfiltered relation (support, for filtered input).
    pub fn support(&self) -> Relation {
        match self {
            ParsedRelation::Plain(r) => r.clone(),
            ParsedRelation::Filtered(f) => f.support(),
        }
    }

    pub fn filtered(&self) -> Option<&FilteredRelation> {
        match self {
            ParsedRelation::Plain(_) => None,
            ParsedRelation::Filtered(f) => Some(f),
        }
    }
}

/// Parses either input format. Text when the first significant byte is not
/// `{`, JSON otherwise.
///
/// Text format, one directive or tuple per line, `#` starts a comment:
/// ```text
/// dims 2 2 2            # axis sizes, required first
/// axes I J K            # optional axis names
/// labels 0 a b          # optional atom labels for one axis
/// 0 0 0                 # a tuple of 0-based atom indices...
/// 0 0 1 0.25            # ...optionally with a filtration value
/// ```
/// Value columns are all-or-none. Duplicate tuples are an error.
///
/// JSON format: `{"dims": [...], "axes": [...]?, "labels": [[...], ...]?,
/// "tuples": [[...], ...], "values": [...]?}`.
pub fn parse_relation(input: &str) -> Result<ParsedRelation> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

fn parse_text(input: &str) -> Result<ParsedRelation> {
    let mut axes: Option<Vec<IndexSet>> = None;
    let mut tuples: Vec<(usize, Tuple, Option<f64>)> = Vec::new();
    let err = |line: usize, msg: &str| Error::Parse { line, msg: msg.into() };

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "dims" => {
                if axes.is_some() {
                    return Err(err(line_no, "repeated dims header"));
                }
                let dims: Vec<usize> = fields[1..]
                    .iter()
                    .map(|f| f.parse().map_err(|_| err(line_no, "dims expects nonnegative integers")))
                    .collect::<Result<_>>()?;
                if dims.is_empty() {
                    return Err(err(line_no, "dims needs at least one axis size"));
                }
                axes = Some(
                    dims.iter()
                        .enumerate()
                        .map(|(k, &n)| IndexSet::numbered(default_axis_label(k), n))
                        .collect(),
                );
            }
            "axes" => {
                let axes = axes.as_mut().ok_or_else(|| err(line_no, "axes before dims"))?;
                if !tuples.is_empty() {
                    return Err(err(line_no, "axes directive after tuple lines"));
                }
                if fields.len() - 1 != axes.len() {
                    return Err(err(line_no, "axes needs one name per axis"));
                }
                for (a, name) in axes.iter_mut().zip(&fields[1..]) {
                    a.label = (*name).to_string();
                }
            }
            "labels" => {
                let axes = axes.as_mut().ok_or_else(|| err(line_no, "labels before dims"))?;
                if !tuples.is_empty() {
                    return Err(err(line_no, "labels directive after tuple lines"));
                }
                let k: usize = fields
                    .get(1)
                    .and_then(|f| f.parse().ok())
                    .ok_or_else(|| err(line_no, "labels expects an axis number"))?;
                if k >= axes.len() {
                    return Err(err(line_no, "labels axis out of range"));
                }
                if fields.len() - 2 != axes[k].len() {
                    return Err(err(line_no, "labels needs one entry per atom"));
                }
                axes[k].elements = fields[2..].iter().map(|s| s.to_string()).collect();
            }
            _ => {
                let axes = axes.as_ref().ok_or_else(|| err(line_no, "tuple before dims header"))?;
                let m = axes.len();
                let (value, coords) = match fields.len() {
                    n if n == m => (None, &fields[..]),
                    n if n == m + 1 => {
                        let v: f64 = fields[m]
                            .parse()
                            .map_err(|_| err(line_no, "malformed filtration value"))?;
                        if !v.is_finite() {
                            return Err(err(line_no, "filtration value must be finite"));
                        }
                        (Some(v), &fields[..m])
                    }
                    _ => return Err(err(line_no, "wrong number of fields for a tuple line")),
                };
                let mut t = Tuple::with_capacity(m);
                for (k, f) in coords.iter().enumerate() {
                    let a: u32 =
                        f.parse().map_err(|_| err(line_no, "malformed atom index"))?;
                    if a as usize >= axes[k].len() {
                        return Err(err(line_no, "atom index out of range for its axis"));
                    }
                    t.push(a);
                }
                tuples.push((line_no, t, value));
            }
        }
    }

    let axes = axes.ok_or_else(|| err(input.lines().count().max(1), "missing dims header"))?;
    let valued = tuples.iter().filter(|(_, _, v)| v.is_some()).count();
    if valued != 0 && valued != tuples.len() {
        let (line, _, _) = tuples.iter().find(|(_, _, v)| v.is_none()).unwrap();
        return Err(err(*line, "value column must appear on every tuple line or none"));
    }
    let mut seen = BTreeSet::new();
    for (line, t, _) in &tuples {
        if !seen.insert(t.clone()) {
            return Err(err(*line, &format!("duplicate tuple {}", fmt_tuple(t))));
        }
    }
    if valued > 0 {
        let entries = tuples.into_iter().map(|(_, t, v)| (t, v.unwrap())).collect();
        Ok(ParsedRelation::Filtered(FilteredRelation::new(axes, entries)?))
    } else {
        let tuples = tuples.into_iter().map(|(_, t, _)| t).collect();
        Ok(ParsedRelation::Plain(Relation::new(axes, tuples)?))
    }
}

fn parse_json(input: &str) -> Result<ParsedRelation> {
    let v: serde_json::Value =
        serde_json::from_str(input).map_err(|e| Error::Json(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| Error::Json("top level must be an object".into()))?;
    let dims: Vec<usize> = obj
        .get("dims")
        .and_then(|d| d.as_array())
        .ok_or_else(|| Error::Json("missing dims array".into()))?
        .iter()
        .map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| Error::Json("bad dims entry".into())))
        .collect::<Result<_>>()?;
    if dims.is_empty() {
        return Err(Error::Json("dims needs at least one axis".into()));
    }
    let mut axes: Vec<IndexSet> = dims
        .iter()
        .enumerate()
        .map(|(k, &n)| IndexSet::numbered(default_axis_label(k), n))
        .collect();
    if let Some(names) = obj.get("axes") {
        let names = names.as_array().ok_or_else(|| Error::Json("axes must be an array".into()))?;
        if names.len() != axes.len() {
            return Err(Error::Json("axes needs one name per axis".into()));
        }
        for (a, n) in axes.iter_mut().zip(names) {
            a.label = n.as_str().ok_or_else(|| Error::Json("axis name must be a string".into()))?.to_string();
        }
    }
    if let Some(labels) = obj.get("labels") {
        let labels =
            labels.as_array().ok_or_else(|| Error::Json("labels must be an array".into()))?;
        if labels.len() != axes.len() {
            return Err(Error::Json("labels needs one list per axis".into()));
        }
        for (k, (a, l)) in axes.iter_mut().zip(labels).enumerate() {
            let l = l.as_array().ok_or_else(|| Error::Json("labels entries must be arrays".into()))?;
            if l.len() != a.len() {
                return Err(Error::Json(format!("labels for axis {k} need one entry per atom")));
            }
            a.elements = l
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Json("atom labels must be strings".into()))
                })
                .collect::<Result<_>>()?;
        }
    }
    let tuples: Vec<Tuple> = obj
        .get("tuples")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Error::Json("missing tuples array".into()))?
        .iter()
        .map(|t| {
            t.as_array()
                .ok_or_else(|| Error::Json("tuples entries must be arrays".into()))?
                .iter()
                .map(|x| {
                    x.as_u64().map(|n| n as u32).ok_or_else(|| Error::Json("bad atom index".into()))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    match obj.get("values") {
        None => Ok(ParsedRelation::Plain(Relation::new(axes, tuples)?)),
        Some(vals) => {
            let vals =
                vals.as_array().ok_or_else(|| Error::Json("values must be an array".into()))?;
            if vals.len() != tuples.len() {
                return Err(Error::Json("values needs one entry per tuple".into()));
            }
            let entries = tuples
                .into_iter()
                .zip(vals)
                .map(|(t, v)| {
                    v.as_f64().map(|v| (t, v)).ok_or_else(|| Error::Json("bad value entry".into()))
                })
                .collect::<Result<_>>()?;
            Ok(ParsedRelation::Filtered(FilteredRelation::new(axes, entries)?))
        }
    }
}

/// Uniform random relation: each tuple kept independently with probability
/// `density`.
pub fn random_relation(dims: &[usize], density: f64, rng: &mut impl Rng) -> Relation {
    let tuples = lex_tuples(dims).into_iter().filter(|_| rng.random::<f64>() < density).collect();
    Relation::from_dims(dims, tuples).expect("generated tuples are in range")
}

/// Like [`random_relation`], with i.i.d. uniform values on the kept tuples.
pub fn random_filtered_relation(
    dims: &[usize],
    density: f64,
    rng: &mut impl Rng,
) -> FilteredRelation {
    let mut entries = Vec::new();
    for t in lex_tuples(dims) {
        if rng.random::<f64>() < density {
            entries.push((t, rng.random::<f64>()));
        }
    }
    let axes = dims
        .iter()
        .enumerate()
        .map(|(k, &n)| IndexSet::numbered(default_axis_label(k), n))
        .collect();
    FilteredRelation::new(axes, entries).expect("generated entries are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn hexagon() -> Relation {
        crate::catalog::hexagon()
    }

    #[test]
    fn hexagon_slice_and_project() {
        let r = hexagon();
        let s = r.slice(2, 0).unwrap();
        assert_eq!(s.tuples(), &[vec![0, 0], vec![1, 0], vec![1, 1]]);
        let p = r.project(&[2]).unwrap();
        assert_eq!(p.len(), 4); // all four pairs
        assert_eq!(p.arity(), 2);
    }

    #[test]
    fn rejects_duplicates_and_bad_atoms() {
        assert!(matches!(
            Relation::from_dims(&[2, 2], vec![vec![0, 0], vec![0, 0]]),
            Err(Error::DuplicateTuple(_))
        ));
        assert!(matches!(
            Relation::from_dims(&[2, 2], vec![vec![0, 2]]),
            Err(Error::AtomOutOfRange { .. })
        ));
        assert!(matches!(
            Relation::from_dims(&[2, 2], vec![vec![0, 0, 0]]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn parse_text_roundtrip() {
        let r = hexagon();
        let parsed = parse_relation(&r.to_text()).unwrap();
        match parsed {
            ParsedRelation::Plain(p) => assert_eq!(p, r),
            _ => panic!("expected plain relation"),
        }
    }

    #[test]
    fn parse_text_with_values_and_labels() {
        let text = "
            # toy filtered relation
            dims 2 2
            axes A B
            labels 0 x y
            0 0 0.5
            1 1 0.25
        ";
        let ParsedRelation::Filtered(f) = parse_relation(text).unwrap() else {
            panic!("expected filtered relation");
        };
        assert_eq!(f.axes()[0].label, "A");
        assert_eq!(f.axes()[0].elements, vec!["x", "y"]);
        assert_eq!(f.value(&[1, 1]), Some(0.25));
        assert_eq!(f.sublevel(0.3).tuples(), &[vec![1, 1]]);
        assert_eq!(f.sublevel(1.0).len(), 2);
        let reparsed = parse_relation(&f.to_text()).unwrap();
        assert_eq!(reparsed.filtered().unwrap(), &f);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "dims 2 2\n0 0\n0 5\n";
        match parse_relation(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let dup = "dims 2 2\n0 0\n0 0\n";
        match parse_relation(dup) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("duplicate"));
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
        let mixed = "dims 2 2\n0 0 0.5\n1 1\n";
        assert!(matches!(parse_relation(mixed), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn parse_json_forms() {
        let plain = r#"{"dims": [2, 3], "tuples": [[0, 2], [1, 0]]}"#;
        let r = parse_relation(plain).unwrap().support();
        assert_eq!(r.len(), 2);
        assert_eq!(r.dims(), vec![2, 3]);

        let filtered = r#"{"dims": [2], "axes": ["V"], "tuples": [[0], [1]], "values": [0.0, 1.0]}"#;
        let ParsedRelation::Filtered(f) = parse_relation(filtered).unwrap() else {
            panic!("expected filtered");
        };
        assert_eq!(f.axes()[0].label, "V");
        assert_eq!(f.sublevel(0.5).len(), 1);
    }

    #[test]
    fn rebracket_keeps_cardinality() {
        let r = hexagon();
        for keep in 0..3 {
            let b = r.rebracket(keep).unwrap();
            assert_eq!(b.arity(), 2);
            assert_eq!(b.len(), r.len());
            assert_eq!(b.axes()[1].len(), 4);
        }
        let b = r.rebracket(0).unwrap();
        assert_eq!(b.axes()[1].label, "JxK");
        // (i,j,k) ↦ (i, j*|K|+k)
        assert!(b.contains(&[0, 1])); // from (0,0,1)
        assert!(b.contains(&[1, 2])); // from (1,1,0)
    }

    #[test]
    fn product_of_relations() {
        let a = Relation::from_dims(&[2], vec![vec![0], vec![1]]).unwrap();
        let b = Relation::from_dims(&[3], vec![vec![2]]).unwrap();
        let p = a.product(&b).unwrap();
        assert_eq!(p.arity(), 2);
        assert_eq!(p.len(), 2);
        assert!(p.contains(&[1, 2]));
    }

    #[test]
    fn sublevel_of_generated_filtered_relation_is_monotone() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let f = random_filtered_relation(&[3, 3], 0.8, &mut rng);
        let cuts = f.critical_values();
        for w in cuts.windows(2) {
            let lo = f.sublevel(w[0]);
            let hi = f.sublevel(w[1]);
            assert!(lo.tuples().iter().all(|t| hi.contains(t)));
        }
        if let Some(&last) = cuts.last() {
            assert_eq!(f.sublevel(last), f.support());
        }
    }

    proptest! {
        #[test]
        fn slice_tuples_embed_in_projection(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[3, 2, 3], 0.5, &mut rng);
            let k = (seed % 3) as usize;
            let p = r.project(&[k]).unwrap();
            for atom in 0..r.axis(k).len() as u32 {
                let s = r.slice(k, atom).unwrap();
                prop_assert!(s.tuples().iter().all(|t| p.contains(t)));
            }
            // The projection is the union of the slices.
            let union: BTreeSet<Tuple> = (0..r.axis(k).len() as u32)
                .flat_map(|a| r.slice(k, a).unwrap().tuples().to_vec())
                .collect();
            prop_assert_eq!(union.len(), p.len());
        }

        #[test]
        fn project_is_order_independent(seed in 0u64..200) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let r = random_relation(&[2, 3, 2, 2], 0.4, &mut rng);
            let a = r.project(&[1]).unwrap().project(&[2]).unwrap(); // drop axis 1 then original axis 3
            let b = r.project(&[3]).unwrap().project(&[1]).unwrap();
            let c = r.project(&[1, 3]).unwrap();
            prop_assert_eq!(a.tuples(), c.tuples());
            prop_assert_eq!(b.tuples(), c.tuples());
        }
    }
}
