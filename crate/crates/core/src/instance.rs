//! Problem data for the capacitated electric vehicle routing problem and the
//! reader/writer for the competition instance format.
//!
//! The format is TSPLIB-like:
//!
//! ```text
//! NAME: E-n22-k4
//! DIMENSION: 22          # customers + depot
//! STATIONS: 8
//! CAPACITY: 6000
//! ENERGY_CAPACITY: 94
//! ENERGY_CONSUMPTION: 1.20
//! EDGE_WEIGHT_TYPE: EUC_2D
//! NODE_COORD_SECTION     # DIMENSION + STATIONS lines: id x y
//! DEMAND_SECTION         # DIMENSION lines: id demand
//! STATIONS_COORD_SECTION # one station id per line
//! DEPOT_SECTION          # depot id, terminated by -1
//! EOF
//! ```
//!
//! Node ids are 1-based in files and 0-based ([`NodeId`]) in memory. Distances
//! are exact Euclidean distances in double precision; no rounding is applied,
//! so changing that convention would invalidate every reported score.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::path::Path;

use thiserror::Error;

/// Node count up to which the full distance matrix is precomputed.
pub const MATRIX_NODE_LIMIT: usize = 1500;

/// Index of a node in file order (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Depot,
    Customer,
    Afs,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("line {line}: demand exceeds capacity (node {node}: {demand} > {capacity})")]
    DemandExceedsCapacity {
        line: usize,
        node: usize,
        demand: u64,
        capacity: u64,
    },
    #[error("line {line}: unsupported edge weight type `{kind}` (only EUC_2D)")]
    UnsupportedWeightType { line: usize, kind: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn malformed(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// Plain node data used to assemble an [`Instance`] programmatically.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub kind: NodeKind,
    pub x: f64,
    pub y: f64,
    pub demand: u64,
}

impl NodeSpec {
    pub fn depot(x: f64, y: f64) -> Self {
        NodeSpec {
            kind: NodeKind::Depot,
            x,
            y,
            demand: 0,
        }
    }

    pub fn customer(x: f64, y: f64, demand: u64) -> Self {
        NodeSpec {
            kind: NodeKind::Customer,
            x,
            y,
            demand,
        }
    }

    pub fn afs(x: f64, y: f64) -> Self {
        NodeSpec {
            kind: NodeKind::Afs,
            x,
            y,
            demand: 0,
        }
    }
}

/// Immutable problem data. Cheap to share across threads behind a reference.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    comment: Option<String>,
    optimal_value: Option<f64>,
    vehicles: Option<usize>,
    coords: Vec<(f64, f64)>,
    kinds: Vec<NodeKind>,
    demand: Vec<u64>,
    cargo_capacity: u64,
    battery_capacity: f64,
    consumption_rate: f64,
    depot: NodeId,
    customers: Vec<NodeId>,
    stations: Vec<NodeId>,
    recharge_points: Vec<NodeId>,
    matrix: Option<Vec<f64>>,
    nearest_recharge: Vec<(NodeId, f64)>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.comment == other.comment
            && self.optimal_value == other.optimal_value
            && self.vehicles == other.vehicles
            && self.coords == other.coords
            && self.kinds == other.kinds
            && self.demand == other.demand
            && self.cargo_capacity == other.cargo_capacity
            && self.battery_capacity == other.battery_capacity
            && self.consumption_rate == other.consumption_rate
    }
}

#[inline]
fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt()
}

impl Instance {
    /// Builds an instance from node data. Exactly one node must be a depot.
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<NodeSpec>,
        cargo_capacity: u64,
        battery_capacity: f64,
        consumption_rate: f64,
    ) -> Result<Self, InstanceError> {
        let mut depot = None;
        for (i, n) in nodes.iter().enumerate() {
            if n.kind == NodeKind::Depot {
                if depot.is_some() {
                    return Err(InstanceError::Invalid("more than one depot".into()));
                }
                depot = Some(NodeId(i));
            }
            if n.kind != NodeKind::Customer && n.demand != 0 {
                return Err(InstanceError::Invalid(format!(
                    "node {i} is not a customer but has demand {}",
                    n.demand
                )));
            }
            if !(n.x.is_finite() && n.y.is_finite()) {
                return Err(InstanceError::Invalid(format!(
                    "node {i} has non-finite coordinates"
                )));
            }
        }
        let depot = depot.ok_or(InstanceError::Missing("depot"))?;
        if cargo_capacity == 0 {
            return Err(InstanceError::Invalid(
                "cargo capacity must be positive".into(),
            ));
        }
        if !(battery_capacity > 0.0 && battery_capacity.is_finite()) {
            return Err(InstanceError::Invalid(
                "battery capacity must be positive".into(),
            ));
        }
        if !(consumption_rate > 0.0 && consumption_rate.is_finite()) {
            return Err(InstanceError::Invalid(
                "consumption rate must be positive".into(),
            ));
        }
        for (i, n) in nodes.iter().enumerate() {
            if n.demand > cargo_capacity {
                return Err(InstanceError::DemandExceedsCapacity {
                    line: 0,
                    node: i,
                    demand: n.demand,
                    capacity: cargo_capacity,
                });
            }
        }

        let coords: Vec<_> = nodes.iter().map(|n| (n.x, n.y)).collect();
        let kinds: Vec<_> = nodes.iter().map(|n| n.kind).collect();
        let demand: Vec<_> = nodes.iter().map(|n| n.demand).collect();
        let customers: Vec<_> = (0..nodes.len())
            .filter(|&i| kinds[i] == NodeKind::Customer)
            .map(NodeId)
            .collect();
        let stations: Vec<_> = (0..nodes.len())
            .filter(|&i| kinds[i] == NodeKind::Afs)
            .map(NodeId)
            .collect();
        let recharge_points: Vec<_> = (0..nodes.len())
            .filter(|&i| kinds[i] != NodeKind::Customer)
            .map(NodeId)
            .collect();

        let n = coords.len();
        let matrix = (n <= MATRIX_NODE_LIMIT).then(|| {
            let mut m = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = euclid(coords[i], coords[j]);
                    m[i * n + j] = d;
                    m[j * n + i] = d;
                }
            }
            m
        });

        let mut inst = Instance {
            name: name.into(),
            comment: None,
            optimal_value: None,
            vehicles: None,
            coords,
            kinds,
            demand,
            cargo_capacity,
            battery_capacity,
            consumption_rate,
            depot,
            customers,
            stations,
            recharge_points,
            matrix,
            nearest_recharge: Vec::new(),
        };
        inst.nearest_recharge = (0..n)
            .map(|i| {
                let mut best = (inst.depot, f64::INFINITY);
                for &q in &inst.recharge_points {
                    let d = inst.distance(NodeId(i), q);
                    if d < best.1 {
                        best = (q, d);
                    }
                }
                best
            })
            .collect();
        Ok(inst)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn comment(&self) -> Option<&str> {
        self.comment.as_deref()
    }

    /// Optimal or best known value if the file declares one.
    pub fn optimal_value(&self) -> Option<f64> {
        self.optimal_value
    }

    pub fn vehicles(&self) -> Option<usize> {
        self.vehicles
    }

    /// Total node count |V| = depot + customers + stations.
    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn depot(&self) -> NodeId {
        self.depot
    }

    pub fn customers(&self) -> &[NodeId] {
        &self.customers
    }

    pub fn stations(&self) -> &[NodeId] {
        &self.stations
    }

    /// Depot and all stations, in ascending id order.
    pub fn recharge_points(&self) -> &[NodeId] {
        &self.recharge_points
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.kinds[node.0]
    }

    #[inline]
    pub fn is_depot(&self, node: NodeId) -> bool {
        node == self.depot
    }

    #[inline]
    pub fn is_customer(&self, node: NodeId) -> bool {
        self.kinds[node.0] == NodeKind::Customer
    }

    #[inline]
    pub fn is_afs(&self, node: NodeId) -> bool {
        self.kinds[node.0] == NodeKind::Afs
    }

    /// Depot or station.
    #[inline]
    pub fn is_recharge(&self, node: NodeId) -> bool {
        self.kinds[node.0] != NodeKind::Customer
    }

    pub fn coord(&self, node: NodeId) -> (f64, f64) {
        self.coords[node.0]
    }

    #[inline]
    pub fn demand(&self, node: NodeId) -> u64 {
        self.demand[node.0]
    }

    pub fn cargo_capacity(&self) -> u64 {
        self.cargo_capacity
    }

    pub fn battery_capacity(&self) -> f64 {
        self.battery_capacity
    }

    pub fn consumption_rate(&self) -> f64 {
        self.consumption_rate
    }

    /// Distance drivable on a full battery.
    pub fn reach(&self) -> f64 {
        self.battery_capacity / self.consumption_rate
    }

    /// Euclidean distance between two nodes.
    #[inline]
    pub fn distance(&self, i: NodeId, j: NodeId) -> f64 {
        match &self.matrix {
            Some(m) => m[i.0 * self.coords.len() + j.0],
            None => euclid(self.coords[i.0], self.coords[j.0]),
        }
    }

    /// Distance without consulting the matrix.
    pub fn distance_uncached(&self, i: NodeId, j: NodeId) -> f64 {
        euclid(self.coords[i.0], self.coords[j.0])
    }

    pub fn has_matrix(&self) -> bool {
        self.matrix.is_some()
    }

    /// Energy consumed driving the edge `i -> j`.
    #[inline]
    pub fn energy(&self, i: NodeId, j: NodeId) -> f64 {
        self.consumption_rate * self.distance(i, j)
    }

    /// Closest recharge point (depot or station) to `node`, lowest id on ties.
    #[inline]
    pub fn nearest_recharge(&self, node: NodeId) -> (NodeId, f64) {
        self.nearest_recharge[node.0]
    }

    /// Customers that are not within half the reach of any recharge point.
    /// The repair procedure may fail on instances where this is non-empty.
    pub fn assumption_violations(&self) -> Vec<NodeId> {
        let half = self.reach() / 2.0;
        self.customers
            .iter()
            .copied()
            .filter(|&c| self.nearest_recharge(c).1 > half)
            .collect()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let file = std::fs::File::open(path)?;
        parse_instance(io::BufReader::new(file))
    }

    /// Serializes back into the competition format.
    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        let dimension = self.node_count() - self.stations.len();
        writeln!(out, "NAME: {}", self.name)?;
        if let Some(c) = &self.comment {
            writeln!(out, "COMMENT: {c}")?;
        }
        writeln!(out, "TYPE: EVRP")?;
        if let Some(v) = self.optimal_value {
            writeln!(out, "OPTIMAL_VALUE: {v}")?;
        }
        if let Some(v) = self.vehicles {
            writeln!(out, "VEHICLES: {v}")?;
        }
        writeln!(out, "DIMENSION: {dimension}")?;
        writeln!(out, "STATIONS: {}", self.stations.len())?;
        writeln!(out, "CAPACITY: {}", self.cargo_capacity)?;
        writeln!(out, "ENERGY_CAPACITY: {}", self.battery_capacity)?;
        writeln!(out, "ENERGY_CONSUMPTION: {}", self.consumption_rate)?;
        writeln!(out, "EDGE_WEIGHT_TYPE: EUC_2D")?;
        writeln!(out, "NODE_COORD_SECTION")?;
        for (i, (x, y)) in self.coords.iter().enumerate() {
            writeln!(out, "{} {} {}", i + 1, x, y)?;
        }
        writeln!(out, "DEMAND_SECTION")?;
        for (i, kind) in self.kinds.iter().enumerate() {
            if *kind != NodeKind::Afs {
                writeln!(out, "{} {}", i + 1, self.demand[i])?;
            }
        }
        writeln!(out, "STATIONS_COORD_SECTION")?;
        for s in &self.stations {
            writeln!(out, "{}", s.0 + 1)?;
        }
        writeln!(out, "DEPOT_SECTION")?;
        writeln!(out, "{}", self.depot.0 + 1)?;
        writeln!(out, "-1")?;
        writeln!(out, "EOF")?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("instance text is utf-8")
    }
}

impl std::str::FromStr for Instance {
    type Err = InstanceError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_instance(text.as_bytes())
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    Demand,
    Stations,
    Depot,
    Done,
}

fn section_of(keyword: &str) -> Option<Section> {
    match keyword {
        "NODE_COORD_SECTION" => Some(Section::Coords),
        "DEMAND_SECTION" => Some(Section::Demand),
        "STATIONS_COORD_SECTION" | "STATION_SECTION" | "STATIONS_SECTION" => {
            Some(Section::Stations)
        }
        "DEPOT_SECTION" => Some(Section::Depot),
        "EOF" => Some(Section::Done),
        _ => None,
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, InstanceError> {
    tok.parse()
        .map_err(|_| malformed(line, format!("cannot parse {what} from `{tok}`")))
}

/// Reads a competition-format instance.
pub fn parse_instance<R: BufRead>(source: R) -> Result<Instance, InstanceError> {
    let mut name = None;
    let mut comment = None;
    let mut optimal_value = None;
    let mut vehicles = None;
    let mut dimension: Option<usize> = None;
    let mut n_stations: Option<usize> = None;
    let mut capacity: Option<u64> = None;
    let mut energy_capacity: Option<f64> = None;
    let mut consumption: Option<f64> = None;

    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut demands: Vec<(usize, usize, u64)> = Vec::new();
    let mut station_ids: Vec<(usize, usize)> = Vec::new();
    let mut depot_id: Option<(usize, usize)> = None;
    let mut seen_coords = false;
    let mut seen_demand = false;

    let mut section = Section::Header;
    for (idx, raw) in source.lines().enumerate() {
        let lineno = idx + 1;
        let raw = raw?;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let upper = line.to_ascii_uppercase();
        if let Some(s) = section_of(upper.split_whitespace().next().unwrap_or("")) {
            if s == Section::Coords {
                seen_coords = true;
            }
            if s == Section::Demand {
                seen_demand = true;
            }
            section = s;
            if s == Section::Done {
                break;
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match section {
            Section::Header => {
                let (key, value) = line.split_once(':').ok_or_else(|| {
                    malformed(lineno, format!("expected `KEY: value`, got `{line}`"))
                })?;
                let key = key.trim().to_ascii_uppercase();
                let value = value.trim();
                match key.as_str() {
                    "NAME" => name = Some(value.to_string()),
                    "COMMENT" => comment = Some(value.to_string()),
                    "TYPE" => {}
                    "OPTIMAL_VALUE" => {
                        optimal_value = Some(parse_num(value, lineno, "optimal value")?)
                    }
                    "VEHICLES" => vehicles = Some(parse_num(value, lineno, "vehicle count")?),
                    "DIMENSION" => dimension = Some(parse_num(value, lineno, "dimension")?),
                    "STATIONS" => n_stations = Some(parse_num(value, lineno, "station count")?),
                    "CAPACITY" => capacity = Some(parse_num(value, lineno, "capacity")?),
                    "ENERGY_CAPACITY" => {
                        energy_capacity = Some(parse_num(value, lineno, "energy capacity")?)
                    }
                    "ENERGY_CONSUMPTION" => {
                        consumption = Some(parse_num(value, lineno, "energy consumption")?)
                    }
                    "EDGE_WEIGHT_TYPE" | "EDGE_WEIGHT_FORMAT" => {
                        if !value.eq_ignore_ascii_case("EUC_2D") {
                            return Err(InstanceError::UnsupportedWeightType {
                                line: lineno,
                                kind: value.to_string(),
                            });
                        }
                    }
                    _ => return Err(malformed(lineno, format!("unknown header key `{key}`"))),
                }
            }
            Section::Coords => {
                if toks.len() != 3 {
                    return Err(malformed(lineno, "coordinate line must be `id x y`"));
                }
                let id: usize = parse_num(toks[0], lineno, "node id")?;
                if id == 0 {
                    return Err(malformed(lineno, "node ids are 1-based"));
                }
                let x: f64 = parse_num(toks[1], lineno, "x coordinate")?;
                let y: f64 = parse_num(toks[2], lineno, "y coordinate")?;
                if coords.len() < id {
                    coords.resize(id, None);
                }
                if coords[id - 1].replace((x, y)).is_some() {
                    return Err(malformed(
                        lineno,
                        format!("duplicate coordinates for node {id}"),
                    ));
                }
            }
            Section::Demand => {
                if toks.len() != 2 {
                    return Err(malformed(lineno, "demand line must be `id demand`"));
                }
                let id: usize = parse_num(toks[0], lineno, "node id")?;
                let d: u64 = parse_num(toks[1], lineno, "demand")?;
                if id == 0 {
                    return Err(malformed(lineno, "node ids are 1-based"));
                }
                demands.push((lineno, id, d));
            }
            Section::Stations => {
                if toks.len() != 1 {
                    return Err(malformed(lineno, "station line must hold a single node id"));
                }
                let id: usize = parse_num(toks[0], lineno, "station id")?;
                if id == 0 {
                    return Err(malformed(lineno, "node ids are 1-based"));
                }
                station_ids.push((lineno, id));
            }
            Section::Depot => {
                for tok in toks {
                    let id: i64 = parse_num(tok, lineno, "depot id")?;
                    if id == -1 {
                        section = Section::Header;
                        break;
                    }
                    if id <= 0 {
                        return Err(malformed(lineno, "depot id must be positive"));
                    }
                    if depot_id.is_some() {
                        return Err(malformed(lineno, "only one depot is supported"));
                    }
                    depot_id = Some((lineno, id as usize));
                }
            }
            Section::Done => unreachable!(),
        }
    }

    let capacity = capacity.ok_or(InstanceError::Missing("CAPACITY header"))?;
    let energy_capacity =
        energy_capacity.ok_or(InstanceError::Missing("ENERGY_CAPACITY header"))?;
    let consumption = consumption.ok_or(InstanceError::Missing("ENERGY_CONSUMPTION header"))?;
    if !seen_coords {
        return Err(InstanceError::Missing("NODE_COORD_SECTION"));
    }
    if !seen_demand {
        return Err(InstanceError::Missing("DEMAND_SECTION"));
    }
    let (depot_line, depot_id) = depot_id.ok_or(InstanceError::Missing("DEPOT_SECTION"))?;

    let n = coords.len();
    let coords: Vec<(f64, f64)> = coords
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| InstanceError::Invalid(format!("node {} has no coordinates", i + 1)))
        })
        .collect::<Result<_, _>>()?;
    let n_stations = n_stations.unwrap_or(station_ids.len());
    if let Some(dim) = dimension {
        if dim + n_stations != n {
            return Err(InstanceError::Invalid(format!(
                "DIMENSION {dim} + STATIONS {n_stations} does not match {n} coordinate lines"
            )));
        }
    }
    if station_ids.len() != n_stations {
        return Err(InstanceError::Invalid(format!(
            "STATIONS declares {n_stations} but the station section lists {}",
            station_ids.len()
        )));
    }

    let mut kinds = vec![NodeKind::Customer; n];
    if depot_id > n {
        return Err(malformed(
            depot_line,
            format!("depot id {depot_id} out of range"),
        ));
    }
    kinds[depot_id - 1] = NodeKind::Depot;
    for &(line, id) in &station_ids {
        if id > n {
            return Err(malformed(line, format!("station id {id} out of range")));
        }
        if kinds[id - 1] != NodeKind::Customer {
            return Err(malformed(
                line,
                format!("node {id} listed twice as depot/station"),
            ));
        }
        kinds[id - 1] = NodeKind::Afs;
    }

    let mut demand: Vec<Option<u64>> = vec![None; n];
    for &(line, id, d) in &demands {
        if id > n {
            return Err(malformed(line, format!("demand for unknown node {id}")));
        }
        if kinds[id - 1] != NodeKind::Customer && d != 0 {
            return Err(malformed(
                line,
                format!("node {id} is a depot or station but has demand {d}"),
            ));
        }
        if d > capacity {
            return Err(InstanceError::DemandExceedsCapacity {
                line,
                node: id,
                demand: d,
                capacity,
            });
        }
        demand[id - 1] = Some(d);
    }

    let mut nodes = Vec::with_capacity(n);
    for i in 0..n {
        let d = match kinds[i] {
            NodeKind::Customer => demand[i].ok_or_else(|| {
                InstanceError::Invalid(format!("customer {} has no demand", i + 1))
            })?,
            _ => 0,
        };
        nodes.push(NodeSpec {
            kind: kinds[i],
            x: coords[i].0,
            y: coords[i].1,
            demand: d,
        });
    }

    let mut inst = Instance::new(
        name.unwrap_or_else(|| "unnamed".into()),
        nodes,
        capacity,
        energy_capacity,
        consumption,
    )?;
    inst.comment = comment;
    inst.optimal_value = optimal_value;
    inst.vehicles = vehicles;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    pub(crate) const TINY: &str = "\
NAME: tiny
DIMENSION: 2
STATIONS: 1
CAPACITY: 10
ENERGY_CAPACITY: 100
ENERGY_CONSUMPTION: 1.0
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 1 0
DEMAND_SECTION
1 0
2 1
STATIONS_COORD_SECTION
3
DEPOT_SECTION
1
-1
EOF
";

    #[test]
    fn parses_minimal_file() {
        let inst = Instance::from_str(TINY).unwrap();
        assert_eq!(inst.node_count(), 3);
        assert_eq!(inst.depot(), NodeId(0));
        assert_eq!(inst.customers(), &[NodeId(1)]);
        assert_eq!(inst.stations(), &[NodeId(2)]);
        assert_eq!(inst.demand(NodeId(1)), 1);
        assert_eq!(inst.distance(NodeId(0), NodeId(1)), 5.0);
        assert_eq!(inst.distance(NodeId(1), NodeId(0)), 5.0);
        assert_eq!(inst.distance(NodeId(1), NodeId(1)), 0.0);
    }

    #[test]
    fn header_keys_are_case_and_space_tolerant() {
        let text = TINY
            .replace("CAPACITY: 10", "capacity   :   10")
            .replace("ENERGY_CONSUMPTION: 1.0", "Energy_Consumption:1.0");
        let inst = Instance::from_str(&text).unwrap();
        assert_eq!(inst.cargo_capacity(), 10);
    }

    #[test]
    fn rejects_demand_over_capacity() {
        let text = TINY
            .replace("CAPACITY: 10", "CAPACITY: 6000")
            .replace("2 1\n", "2 7000\n");
        let err = Instance::from_str(&text).unwrap_err();
        assert!(err.to_string().contains("demand exceeds capacity"), "{err}");
        assert!(err.to_string().contains("line 14"), "{err}");
    }

    #[test]
    fn rejects_other_weight_types() {
        let text = TINY.replace("EUC_2D", "GEO");
        assert!(matches!(
            Instance::from_str(&text),
            Err(InstanceError::UnsupportedWeightType { line: 7, .. })
        ));
    }

    #[test]
    fn rejects_missing_sections_and_bad_headers() {
        let no_depot: String = TINY.replace("DEPOT_SECTION\n1\n-1\n", "");
        assert!(matches!(
            Instance::from_str(&no_depot),
            Err(InstanceError::Missing("DEPOT_SECTION"))
        ));
        let bad = TINY.replace("CAPACITY: 10", "CAPACITY 10");
        assert!(matches!(
            Instance::from_str(&bad),
            Err(InstanceError::Malformed { line: 4, .. })
        ));
        let nan = TINY.replace("CAPACITY: 10", "CAPACITY: ten");
        assert!(Instance::from_str(&nan).is_err());
    }

    #[test]
    fn reach_is_battery_over_consumption() {
        let inst = Instance::new(
            "r",
            vec![NodeSpec::depot(0.0, 0.0), NodeSpec::customer(1.0, 0.0, 1)],
            1,
            100.0,
            1.25,
        )
        .unwrap();
        assert_eq!(inst.reach(), 80.0);
        let inst = Instance::new(
            "r",
            vec![NodeSpec::depot(0.0, 0.0), NodeSpec::customer(1.0, 0.0, 1)],
            1,
            99.0,
            1.0,
        )
        .unwrap();
        assert_eq!(inst.reach(), 99.0);
    }

    #[test]
    fn writer_round_trips() {
        let inst = Instance::from_str(TINY).unwrap();
        let again = Instance::from_str(&inst.to_text()).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn flags_customers_beyond_half_reach() {
        let inst = Instance::new(
            "far",
            vec![
                NodeSpec::depot(0.0, 0.0),
                NodeSpec::customer(60.0, 0.0, 1),
                NodeSpec::customer(10.0, 0.0, 1),
            ],
            10,
            100.0,
            1.0,
        )
        .unwrap();
        assert_eq!(inst.assumption_violations(), vec![NodeId(1)]);
    }
}
