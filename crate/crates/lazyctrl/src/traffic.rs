//! Hosts, tenants, switches, flows, and traces.
//!
//! Provides the synthetic trace generator (skewed hot-pair traffic with
//! intra-tenant locality), per-switch-pair intensity matrices, and group
//! centrality statistics.

use crate::types::{HostId, MgmtAddr, SwitchId, TenantId, TimeUs, US_PER_SEC};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrafficError {
    #[error("need at least 2 hosts, got {0}")]
    TooFewHosts(u32),
    #[error("need at least 1 switch")]
    NoSwitches,
    #[error("hot pair percentage must be positive when hot flow percentage is nonzero")]
    EmptyHotSet,
    #[error("percentage {0} out of range")]
    BadPercentage(f64),
    #[error("tenant size range is empty or zero")]
    BadTenantRange,
    #[error("unknown switch {0}")]
    UnknownSwitch(SwitchId),
    #[error("no host pair without traffic is available for expansion")]
    NoSilentPairs,
    #[error("host {0} attached to undeclared switch {1}")]
    BadAttachment(HostId, SwitchId),
    #[error("duplicate management address {0}")]
    DuplicateMgmtAddr(MgmtAddr),
    #[error("trace parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Static layout of the network edge: switches, hosts, and tenancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    switches: Vec<SwitchId>,
    hosts: Vec<HostId>,
    attachment: BTreeMap<HostId, SwitchId>,
    tenant: BTreeMap<HostId, TenantId>,
    mgmt_addr: BTreeMap<SwitchId, MgmtAddr>,
    by_switch: BTreeMap<SwitchId, Vec<HostId>>,
    switch_index: BTreeMap<SwitchId, usize>,
}

impl Topology {
    pub fn new(
        switches: Vec<SwitchId>,
        attachment: BTreeMap<HostId, SwitchId>,
        tenant: BTreeMap<HostId, TenantId>,
        mgmt_addr: BTreeMap<SwitchId, MgmtAddr>,
    ) -> Result<Self, TrafficError> {
        let mut switches = switches;
        switches.sort_unstable();
        switches.dedup();
        if switches.is_empty() {
            return Err(TrafficError::NoSwitches);
        }
        let switch_set: BTreeSet<SwitchId> = switches.iter().copied().collect();
        let mut by_switch: BTreeMap<SwitchId, Vec<HostId>> =
            switches.iter().map(|&s| (s, Vec::new())).collect();
        for (&h, &s) in &attachment {
            if !switch_set.contains(&s) {
                return Err(TrafficError::BadAttachment(h, s));
            }
            by_switch.get_mut(&s).unwrap().push(h);
        }
        let mut seen = BTreeSet::new();
        for &addr in mgmt_addr.values() {
            if !seen.insert(addr) {
                return Err(TrafficError::DuplicateMgmtAddr(addr));
            }
        }
        let hosts: Vec<HostId> = attachment.keys().copied().collect();
        let switch_index = switches.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        Ok(Topology {
            switches,
            hosts,
            attachment,
            tenant,
            mgmt_addr,
            by_switch,
            switch_index,
        })
    }

    pub fn switches(&self) -> &[SwitchId] {
        &self.switches
    }

    pub fn hosts(&self) -> &[HostId] {
        &self.hosts
    }

    pub fn n_switches(&self) -> usize {
        self.switches.len()
    }

    pub fn switch_of(&self, host: HostId) -> Option<SwitchId> {
        self.attachment.get(&host).copied()
    }

    pub fn tenant_of(&self, host: HostId) -> Option<TenantId> {
        self.tenant.get(&host).copied()
    }

    pub fn mgmt_addr_of(&self, switch: SwitchId) -> Option<MgmtAddr> {
        self.mgmt_addr.get(&switch).copied()
    }

    pub fn hosts_of(&self, switch: SwitchId) -> &[HostId] {
        self.by_switch.get(&switch).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Position of `switch` in the sorted switch list; intensity matrix rows
    /// use this ordering.
    pub fn switch_index(&self, switch: SwitchId) -> Option<usize> {
        self.switch_index.get(&switch).copied()
    }

    /// Local port of a host on its switch: rank among co-attached hosts.
    pub fn port_of(&self, host: HostId) -> Option<crate::types::PortId> {
        let sw = self.switch_of(host)?;
        let rank = self.hosts_of(sw).iter().position(|&h| h == host)?;
        Some(crate::types::PortId(rank as u32))
    }
}

/// One flow: first-packet time, endpoints, and payload size metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub start_us: TimeUs,
    pub src: HostId,
    pub dst: HostId,
    pub n_packets: u32,
    /// Opaque per-packet byte counts; not serialized in trace files and not
    /// interpreted by the simulator.
    #[serde(skip)]
    pub payload_profile: Vec<u32>,
}

/// A topology plus a time-ordered flow sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub topology: Topology,
    pub flows: Vec<FlowRecord>,
}

impl Trace {
    pub fn new(topology: Topology, mut flows: Vec<FlowRecord>) -> Self {
        sort_flows(&mut flows);
        Trace { topology, flows }
    }

    pub fn duration_us(&self) -> TimeUs {
        self.flows.last().map(|f| f.start_us + 1).unwrap_or(0)
    }
}

fn sort_flows(flows: &mut [FlowRecord]) {
    flows.sort_by(|a, b| {
        (a.start_us, a.src, a.dst)
            .partial_cmp(&(b.start_us, b.src, b.dst))
            .unwrap()
    });
}

/// Symmetric zero-diagonal matrix of normalized new-flow rates between
/// switch pairs. Entries are scaled so the maximum is 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityMatrix {
    pub switches: Vec<SwitchId>,
    n: usize,
    w: Vec<f64>,
}

impl IntensityMatrix {
    pub fn new(switches: Vec<SwitchId>, w: Vec<f64>) -> Self {
        let n = switches.len();
        assert_eq!(w.len(), n * n, "matrix shape mismatch");
        let mut m = IntensityMatrix { switches, n, w };
        m.symmetrize_and_normalize();
        m
    }

    pub fn zero(switches: Vec<SwitchId>) -> Self {
        let n = switches.len();
        IntensityMatrix {
            switches,
            n,
            w: vec![0.0; n * n],
        }
    }

    /// Build from explicit per-pair weights, normalizing by the max entry.
    pub fn from_pairs(switches: Vec<SwitchId>, pairs: &[(SwitchId, SwitchId, f64)]) -> Self {
        let n = switches.len();
        let index: BTreeMap<SwitchId, usize> =
            switches.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut w = vec![0.0; n * n];
        for &(a, b, v) in pairs {
            let (i, j) = (index[&a], index[&b]);
            if i != j {
                w[i * n + j] += v;
                w[j * n + i] += v;
            }
        }
        IntensityMatrix::new(switches, w)
    }

    fn symmetrize_and_normalize(&mut self) {
        let n = self.n;
        for i in 0..n {
            self.w[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let v = 0.5 * (self.w[i * n + j] + self.w[j * n + i]);
                self.w[i * n + j] = v;
                self.w[j * n + i] = v;
            }
        }
        let max = self.w.iter().cloned().fold(0.0_f64, f64::max);
        if max > 0.0 {
            for v in &mut self.w {
                *v /= max;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.w[i * n_checked(self.n, i, j) + j]
    }

    pub fn index_of(&self, switch: SwitchId) -> Option<usize> {
        self.switches.iter().position(|&s| s == switch)
    }

    /// Sum of all entries over unordered pairs.
    pub fn total_weight(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                total += self.get(i, j);
            }
        }
        total
    }
}

#[inline]
fn n_checked(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < n && j < n);
    n
}

/// Where packet counts for generated flows come from.
#[derive(Debug, Clone)]
pub enum PayloadSource {
    /// Log-uniform packet counts in [1, 1000].
    Builtin,
    /// Resample packet counts from an existing trace.
    Samples(Vec<u32>),
}

impl PayloadSource {
    pub fn from_trace(trace: &Trace) -> Self {
        PayloadSource::Samples(trace.flows.iter().map(|f| f.n_packets).collect())
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u32 {
        match self {
            PayloadSource::Builtin => {
                let u: f64 = rng.gen();
                ((1000.0_f64.powf(u)).floor() as u32).clamp(1, 1000)
            }
            PayloadSource::Samples(samples) if !samples.is_empty() => {
                samples[rng.gen_range(0..samples.len())]
            }
            PayloadSource::Samples(_) => 1,
        }
    }
}

/// Parameters for [`generate_synthetic_trace`].
#[derive(Debug, Clone)]
pub struct SynthParams {
    pub n_switches: u32,
    pub n_hosts: u32,
    /// Inclusive range of hosts per tenant.
    pub hosts_per_tenant: (u32, u32),
    /// Percentage of flows drawn from the hot pair set.
    pub p: f64,
    /// Percentage of all host pairs forming the hot set.
    pub q: f64,
    pub duration_s: u64,
    pub n_flows: u64,
    pub payload: PayloadSource,
}

fn pair_key(n: u64, a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    lo as u64 * n + hi as u64
}

/// Generate a skewed synthetic trace: `p`% of flows land on a fixed hot set
/// holding `q`% of all host pairs (hot pairs taken intra-tenant first), the
/// rest are uniform over all pairs. Bit-deterministic for a fixed seed.
pub fn generate_synthetic_trace(params: &SynthParams, seed: u64) -> Result<Trace, TrafficError> {
    if params.n_hosts < 2 {
        return Err(TrafficError::TooFewHosts(params.n_hosts));
    }
    if params.n_switches < 1 {
        return Err(TrafficError::NoSwitches);
    }
    if !(0.0..=100.0).contains(&params.p) {
        return Err(TrafficError::BadPercentage(params.p));
    }
    if !(0.0..=100.0).contains(&params.q) {
        return Err(TrafficError::BadPercentage(params.q));
    }
    if params.p > 0.0 && params.q <= 0.0 {
        return Err(TrafficError::EmptyHotSet);
    }
    let (t_min, t_max) = params.hosts_per_tenant;
    if t_min == 0 || t_min > t_max {
        return Err(TrafficError::BadTenantRange);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_hosts = params.n_hosts;
    let n_switches = params.n_switches;

    // Contiguous block attachment: host h sits on switch floor(h*S/H).
    let mut attachment = BTreeMap::new();
    for h in 0..n_hosts {
        let s = (h as u64 * n_switches as u64 / n_hosts as u64) as u32;
        attachment.insert(HostId(h), SwitchId(s));
    }

    // Tenants cover contiguous host blocks with sizes drawn from the range.
    let mut tenant = BTreeMap::new();
    let mut tenant_blocks: Vec<(u32, u32)> = Vec::new(); // (first host, len)
    let mut next = 0u32;
    let mut tid = 0u32;
    while next < n_hosts {
        let size = rng.gen_range(t_min..=t_max).min(n_hosts - next);
        for h in next..next + size {
            tenant.insert(HostId(h), TenantId(tid));
        }
        tenant_blocks.push((next, size));
        next += size;
        tid += 1;
    }

    let mut mgmt_addr = BTreeMap::new();
    let mut used = HashSet::new();
    for s in 0..n_switches {
        loop {
            let addr = MgmtAddr::new(rng.gen::<u64>());
            if used.insert(addr) {
                mgmt_addr.insert(SwitchId(s), addr);
                break;
            }
        }
    }

    let topology = Topology::new(
        (0..n_switches).map(SwitchId).collect(),
        attachment,
        tenant,
        mgmt_addr,
    )?;

    // Hot set: intra-tenant pairs first (seeded order), then uniform fill.
    let all_pairs = n_hosts as u64 * (n_hosts as u64 - 1) / 2;
    let target_hot = if params.p > 0.0 {
        ((params.q / 100.0 * all_pairs as f64).ceil() as u64).min(all_pairs).max(1)
    } else {
        0
    };
    let mut hot_pairs: Vec<(u32, u32)> = Vec::new();
    let mut hot_keys: HashSet<u64> = HashSet::new();
    if target_hot > 0 {
        let mut intra: Vec<(u32, u32)> = Vec::new();
        for &(first, len) in &tenant_blocks {
            for a in first..first + len {
                for b in (a + 1)..first + len {
                    intra.push((a, b));
                }
            }
        }
        shuffle(&mut intra, &mut rng);
        for &(a, b) in intra.iter().take(target_hot as usize) {
            hot_keys.insert(pair_key(n_hosts as u64, a, b));
            hot_pairs.push((a, b));
        }
        while (hot_pairs.len() as u64) < target_hot {
            let (a, b) = random_pair(&mut rng, n_hosts);
            if hot_keys.insert(pair_key(n_hosts as u64, a, b)) {
                hot_pairs.push((a, b));
            }
        }
    }

    let duration_us = params.duration_s.max(1) * US_PER_SEC;
    let mut flows = Vec::with_capacity(params.n_flows as usize);
    for _ in 0..params.n_flows {
        let (a, b) = if params.p > 0.0 && rng.gen_bool((params.p / 100.0).min(1.0)) {
            hot_pairs[rng.gen_range(0..hot_pairs.len())]
        } else {
            random_pair(&mut rng, n_hosts)
        };
        let (src, dst) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        flows.push(FlowRecord {
            start_us: rng.gen_range(0..duration_us),
            src: HostId(src),
            dst: HostId(dst),
            n_packets: params.payload.draw(&mut rng),
            payload_profile: Vec::new(),
        });
    }

    Ok(Trace::new(topology, flows))
}

fn random_pair(rng: &mut ChaCha8Rng, n_hosts: u32) -> (u32, u32) {
    loop {
        let a = rng.gen_range(0..n_hosts);
        let b = rng.gen_range(0..n_hosts);
        if a != b {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

fn shuffle<T>(items: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

/// New-flow rate between every switch pair over `window`, normalized by the
/// maximum entry. Flows with both endpoints on one switch do not contribute.
pub fn compute_intensity_matrix(trace: &Trace, window: (TimeUs, TimeUs)) -> IntensityMatrix {
    let (t0, t1) = window;
    assert!(t1 > t0, "window must be non-empty");
    let topo = &trace.topology;
    let n = topo.n_switches();
    let mut counts = vec![0u64; n * n];
    for f in &trace.flows {
        if f.start_us < t0 || f.start_us >= t1 {
            continue;
        }
        let (Some(si), Some(sj)) = (
            topo.switch_of(f.src).and_then(|s| topo.switch_index(s)),
            topo.switch_of(f.dst).and_then(|s| topo.switch_index(s)),
        ) else {
            continue;
        };
        if si != sj {
            counts[si * n + sj] += 1;
            counts[sj * n + si] += 1;
        }
    }
    let secs = (t1 - t0) as f64 / US_PER_SEC as f64;
    let w = counts.iter().map(|&c| c as f64 / secs).collect();
    IntensityMatrix::new(topo.switches().to_vec(), w)
}

/// Fraction of the traffic related to `group` that stays inside it, in [0,1].
/// Returns 1 when the group has no related traffic in the window.
pub fn compute_centrality(
    trace: &Trace,
    group: &BTreeSet<SwitchId>,
    window: (TimeUs, TimeUs),
) -> Result<f64, TrafficError> {
    assert!(!group.is_empty(), "group must be nonempty");
    let topo = &trace.topology;
    for &s in group {
        if topo.switch_index(s).is_none() {
            return Err(TrafficError::UnknownSwitch(s));
        }
    }
    let (t0, t1) = window;
    let mut intra = 0u64;
    let mut related = 0u64;
    for f in &trace.flows {
        if f.start_us < t0 || f.start_us >= t1 {
            continue;
        }
        let (Some(a), Some(b)) = (topo.switch_of(f.src), topo.switch_of(f.dst)) else {
            continue;
        };
        let (ina, inb) = (group.contains(&a), group.contains(&b));
        if ina || inb {
            related += 1;
            if ina && inb {
                intra += 1;
            }
        }
    }
    if related == 0 {
        Ok(1.0)
    } else {
        Ok(intra as f64 / related as f64)
    }
}

/// Add `extra_fraction`% new flows between host pairs that exchanged no
/// traffic in the original trace, with start times uniform in `window`.
pub fn expand_trace(
    trace: &Trace,
    extra_fraction: f64,
    window: (TimeUs, TimeUs),
    seed: u64,
) -> Result<Trace, TrafficError> {
    assert!(extra_fraction >= 0.0, "extra fraction must be nonnegative");
    let n_extra = (trace.flows.len() as f64 * extra_fraction / 100.0).round() as u64;
    if n_extra == 0 {
        return Ok(trace.clone());
    }
    let n_hosts = trace.topology.hosts().len() as u32;
    if n_hosts < 2 {
        return Err(TrafficError::NoSilentPairs);
    }
    let all_pairs = n_hosts as u64 * (n_hosts as u64 - 1) / 2;
    let mut active: HashSet<u64> = HashSet::new();
    for f in &trace.flows {
        active.insert(pair_key(n_hosts as u64, f.src.0, f.dst.0));
    }
    if active.len() as u64 >= all_pairs {
        return Err(TrafficError::NoSilentPairs);
    }
    let (t0, t1) = window;
    assert!(t1 > t0, "window must be non-empty");
    let samples: Vec<u32> = trace.flows.iter().map(|f| f.n_packets).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flows = trace.flows.clone();
    for _ in 0..n_extra {
        let (a, b) = loop {
            let (a, b) = random_pair(&mut rng, n_hosts);
            if !active.contains(&pair_key(n_hosts as u64, a, b)) {
                break (a, b);
            }
        };
        let (src, dst) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let n_packets = if samples.is_empty() {
            1
        } else {
            samples[rng.gen_range(0..samples.len())]
        };
        flows.push(FlowRecord {
            start_us: rng.gen_range(t0..t1),
            src: HostId(src),
            dst: HostId(dst),
            n_packets,
            payload_profile: Vec::new(),
        });
    }
    Ok(Trace::new(trace.topology.clone(), flows))
}

#[derive(Serialize, Deserialize)]
struct TraceHeader {
    switch_count: u32,
    host_attachment: Vec<u32>,
    host_tenant: Vec<u32>,
    switch_mgmt_addr: Vec<String>,
}

/// Write a trace: JSON topology header line, then `start_us,src,dst,n_packets`
/// per flow.
pub fn write_trace<W: Write>(trace: &Trace, mut out: W) -> Result<(), TrafficError> {
    let topo = &trace.topology;
    let header = TraceHeader {
        switch_count: topo.n_switches() as u32,
        host_attachment: topo.hosts().iter().map(|&h| topo.switch_of(h).unwrap().0).collect(),
        host_tenant: topo
            .hosts()
            .iter()
            .map(|&h| topo.tenant_of(h).map(|t| t.0).unwrap_or(0))
            .collect(),
        switch_mgmt_addr: topo
            .switches()
            .iter()
            .map(|&s| topo.mgmt_addr_of(s).unwrap().to_hex())
            .collect(),
    };
    serde_json::to_writer(&mut out, &header).map_err(std::io::Error::other)?;
    out.write_all(b"\n")?;
    for f in &trace.flows {
        writeln!(out, "{},{},{},{}", f.start_us, f.src.0, f.dst.0, f.n_packets)?;
    }
    Ok(())
}

/// Parse a trace written by [`write_trace`].
pub fn read_trace<R: BufRead>(input: R) -> Result<Trace, TrafficError> {
    let mut lines = input.lines();
    let header_line = lines
        .next()
        .ok_or_else(|| TrafficError::Parse {
            line: 1,
            msg: "missing header".into(),
        })??;
    let header: TraceHeader =
        serde_json::from_str(&header_line).map_err(|e| TrafficError::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
    if header.host_tenant.len() != header.host_attachment.len() {
        return Err(TrafficError::Parse {
            line: 1,
            msg: "host_tenant and host_attachment length mismatch".into(),
        });
    }
    let mut attachment = BTreeMap::new();
    let mut tenant = BTreeMap::new();
    for (h, (&s, &t)) in header
        .host_attachment
        .iter()
        .zip(header.host_tenant.iter())
        .enumerate()
    {
        attachment.insert(HostId(h as u32), SwitchId(s));
        tenant.insert(HostId(h as u32), TenantId(t));
    }
    let mut mgmt_addr = BTreeMap::new();
    for (i, hex) in header.switch_mgmt_addr.iter().enumerate() {
        let addr = MgmtAddr::parse_hex(hex).ok_or_else(|| TrafficError::Parse {
            line: 1,
            msg: format!("bad mgmt address {hex:?}"),
        })?;
        mgmt_addr.insert(SwitchId(i as u32), addr);
    }
    let topology = Topology::new(
        (0..header.switch_count).map(SwitchId).collect(),
        attachment,
        tenant,
        mgmt_addr,
    )?;

    let mut flows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 2;
        let mut it = line.split(',');
        let mut field = |name: &str| {
            it.next().ok_or_else(|| TrafficError::Parse {
                line: lineno,
                msg: format!("missing field {name}"),
            })
        };
        let start_us: TimeUs = parse_num(field("start_us")?, lineno)?;
        let src: u32 = parse_num(field("src")?, lineno)?;
        let dst: u32 = parse_num(field("dst")?, lineno)?;
        let n_packets: u32 = parse_num(field("n_packets")?, lineno)?;
        if src == dst {
            return Err(TrafficError::Parse {
                line: lineno,
                msg: "flow endpoints equal".into(),
            });
        }
        if n_packets == 0 {
            return Err(TrafficError::Parse {
                line: lineno,
                msg: "zero packet count".into(),
            });
        }
        flows.push(FlowRecord {
            start_us,
            src: HostId(src),
            dst: HostId(dst),
            n_packets,
            payload_profile: Vec::new(),
        });
    }
    Ok(Trace::new(topology, flows))
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T, TrafficError> {
    s.trim().parse().map_err(|_| TrafficError::Parse {
        line,
        msg: format!("bad number {s:?}"),
    })
}

pub fn read_trace_file(path: &std::path::Path) -> Result<Trace, TrafficError> {
    let file = std::fs::File::open(path)?;
    read_trace(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tiny_topology(n_switches: u32, hosts_per_switch: u32) -> Topology {
        let mut attachment = BTreeMap::new();
        let mut tenant = BTreeMap::new();
        let mut mgmt = BTreeMap::new();
        for s in 0..n_switches {
            mgmt.insert(SwitchId(s), MgmtAddr::new(0x1000 + s as u64));
            for i in 0..hosts_per_switch {
                let h = HostId(s * hosts_per_switch + i);
                attachment.insert(h, SwitchId(s));
                tenant.insert(h, TenantId(0));
            }
        }
        Topology::new((0..n_switches).map(SwitchId).collect(), attachment, tenant, mgmt).unwrap()
    }

    fn flow(t: TimeUs, src: u32, dst: u32) -> FlowRecord {
        FlowRecord {
            start_us: t,
            src: HostId(src),
            dst: HostId(dst),
            n_packets: 1,
            payload_profile: Vec::new(),
        }
    }

    #[test]
    fn intensity_single_flow_normalizes_to_one() {
        let topo = tiny_topology(2, 1);
        let trace = Trace::new(topo, vec![flow(0, 0, 1)]);
        let w = compute_intensity_matrix(&trace, (0, 10 * US_PER_SEC));
        assert_eq!(w.get(0, 1), 1.0);
        assert_eq!(w.get(1, 0), 1.0);
        assert_eq!(w.get(0, 0), 0.0);
    }

    #[test]
    fn intensity_empty_window_is_zero() {
        let topo = tiny_topology(2, 1);
        let trace = Trace::new(topo, vec![flow(20 * US_PER_SEC, 0, 1)]);
        let w = compute_intensity_matrix(&trace, (0, 10 * US_PER_SEC));
        assert_eq!(w.get(0, 1), 0.0);
    }

    #[test]
    fn intensity_ratios_follow_flow_counts() {
        // Three switches, one host each: 6 A<->B flows, 3 B<->C flows.
        let topo = tiny_topology(3, 1);
        let mut flows = Vec::new();
        for i in 0..6 {
            flows.push(flow(i, 0, 1));
        }
        for i in 0..3 {
            flows.push(flow(i, 1, 2));
        }
        let trace = Trace::new(topo, flows);
        let w = compute_intensity_matrix(&trace, (0, US_PER_SEC));
        assert_eq!(w.get(0, 1), 1.0);
        assert_eq!(w.get(1, 2), 0.5);
        assert_eq!(w.get(0, 2), 0.0);
    }

    #[test]
    fn centrality_whole_set_is_one() {
        let topo = tiny_topology(3, 2);
        let trace = Trace::new(topo, vec![flow(0, 0, 3), flow(1, 2, 5)]);
        let group: BTreeSet<_> = trace.topology.switches().iter().copied().collect();
        let c = compute_centrality(&trace, &group, (0, US_PER_SEC)).unwrap();
        assert_eq!(c, 1.0);
    }

    #[test]
    fn centrality_arithmetic() {
        // Group {S0}: 17 intra flows (both hosts on S0), 3 crossing.
        let topo = tiny_topology(2, 2);
        let mut flows = Vec::new();
        for i in 0..17 {
            flows.push(flow(i, 0, 1));
        }
        for i in 0..3 {
            flows.push(flow(i, 0, 2));
        }
        let trace = Trace::new(topo, flows);
        let group: BTreeSet<_> = [SwitchId(0)].into_iter().collect();
        let c = compute_centrality(&trace, &group, (0, US_PER_SEC)).unwrap();
        assert!((c - 0.85).abs() < 1e-12);
    }

    #[test]
    fn centrality_no_related_traffic_is_one() {
        let topo = tiny_topology(3, 1);
        let trace = Trace::new(topo, vec![flow(0, 1, 2)]);
        let group: BTreeSet<_> = [SwitchId(0)].into_iter().collect();
        assert_eq!(compute_centrality(&trace, &group, (0, US_PER_SEC)).unwrap(), 1.0);
    }

    #[test]
    fn centrality_unknown_switch_rejected() {
        let topo = tiny_topology(2, 1);
        let trace = Trace::new(topo, vec![]);
        let group: BTreeSet<_> = [SwitchId(9)].into_iter().collect();
        assert!(matches!(
            compute_centrality(&trace, &group, (0, US_PER_SEC)),
            Err(TrafficError::UnknownSwitch(SwitchId(9)))
        ));
    }

    #[test]
    fn generator_rejects_bad_params() {
        let base = SynthParams {
            n_switches: 2,
            n_hosts: 10,
            hosts_per_tenant: (2, 5),
            p: 90.0,
            q: 10.0,
            duration_s: 10,
            n_flows: 100,
            payload: PayloadSource::Builtin,
        };
        let mut p = base.clone();
        p.n_hosts = 1;
        assert!(matches!(generate_synthetic_trace(&p, 1), Err(TrafficError::TooFewHosts(1))));
        let mut p = base.clone();
        p.q = 0.0;
        assert!(matches!(generate_synthetic_trace(&p, 1), Err(TrafficError::EmptyHotSet)));
        let mut p = base;
        p.p = 0.0;
        p.q = 0.0;
        assert!(generate_synthetic_trace(&p, 1).is_ok());
    }

    #[test]
    fn generator_deterministic_for_seed() {
        let params = SynthParams {
            n_switches: 4,
            n_hosts: 40,
            hosts_per_tenant: (5, 10),
            p: 80.0,
            q: 20.0,
            duration_s: 60,
            n_flows: 500,
            payload: PayloadSource::Builtin,
        };
        let a = generate_synthetic_trace(&params, 42).unwrap();
        let b = generate_synthetic_trace(&params, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_trace(&params, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn expand_zero_fraction_is_identity() {
        let topo = tiny_topology(2, 2);
        let trace = Trace::new(topo, vec![flow(0, 0, 2)]);
        let out = expand_trace(&trace, 0.0, (0, US_PER_SEC), 7).unwrap();
        assert_eq!(out, trace);
    }

    #[test]
    fn expand_adds_only_silent_pairs() {
        let topo = tiny_topology(5, 2);
        let mut flows = Vec::new();
        for i in 0..100 {
            flows.push(flow(i, 0, 1));
        }
        let trace = Trace::new(topo, flows);
        let out = expand_trace(&trace, 30.0, (US_PER_SEC, 2 * US_PER_SEC), 7).unwrap();
        assert_eq!(out.flows.len(), 130);
        for f in out.flows.iter().filter(|f| f.start_us >= US_PER_SEC) {
            let pair = (f.src.0.min(f.dst.0), f.src.0.max(f.dst.0));
            assert_ne!(pair, (0, 1), "expansion reused an active pair");
        }
    }

    #[test]
    fn expand_errors_when_all_pairs_active() {
        let topo = tiny_topology(3, 1);
        let trace = Trace::new(topo, vec![flow(0, 0, 1), flow(1, 0, 2), flow(2, 1, 2)]);
        assert!(matches!(
            expand_trace(&trace, 30.0, (0, US_PER_SEC), 7),
            Err(TrafficError::NoSilentPairs)
        ));
    }

    #[test]
    fn trace_file_round_trip() {
        let params = SynthParams {
            n_switches: 3,
            n_hosts: 12,
            hosts_per_tenant: (3, 6),
            p: 50.0,
            q: 50.0,
            duration_s: 5,
            n_flows: 40,
            payload: PayloadSource::Builtin,
        };
        let trace = generate_synthetic_trace(&params, 9).unwrap();
        let mut buf = Vec::new();
        write_trace(&trace, &mut buf).unwrap();
        let parsed = read_trace(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(parsed, trace);
        let mut buf2 = Vec::new();
        write_trace(&parsed, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }
}
