//! Identifier newtypes shared across the crate.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Simulated time in integer microseconds (avoids float drift in event ordering).
pub type TimeUs = u64;

pub const US_PER_SEC: u64 = 1_000_000;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", stringify!($name).chars().next().unwrap(), self.0)
            }
        }
    };
}

id_type!(
    /// An edge switch.
    SwitchId
);
id_type!(
    /// A host (or virtual machine) attached to an edge switch.
    HostId
);
id_type!(
    /// A tenant owning a set of hosts.
    TenantId
);
id_type!(
    /// A local control group produced by the grouping algorithm.
    GroupId
);
id_type!(
    /// A switch-local port.
    PortId
);

/// 48-bit address of a switch management interface, displayed as 12 hex digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MgmtAddr(pub u64);

impl MgmtAddr {
    pub const MASK: u64 = 0xffff_ffff_ffff;

    pub fn new(raw: u64) -> Self {
        MgmtAddr(raw & Self::MASK)
    }

    pub fn to_hex(self) -> String {
        format!("{:012x}", self.0)
    }

    pub fn parse_hex(s: &str) -> Option<Self> {
        if s.len() != 12 {
            return None;
        }
        u64::from_str_radix(s, 16).ok().map(MgmtAddr::new)
    }
}

impl fmt::Display for MgmtAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// 48-bit host address used by the forwarding tables.
///
/// Hosts are canonically addressed from their id in the locally administered
/// range, so topologies do not carry a separate address map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HostAddr(pub u64);

impl HostAddr {
    const BASE: u64 = 0x0200_0000_0000;

    pub fn of(host: HostId) -> Self {
        HostAddr(Self::BASE | host.0 as u64)
    }

    pub fn host(self) -> HostId {
        HostId((self.0 & 0xffff_ffff) as u32)
    }
}

impl fmt::Display for HostAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:012x}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mgmt_addr_hex_round_trip() {
        let a = MgmtAddr::new(0x0a1b_2c3d_4e5f);
        assert_eq!(a.to_hex(), "0a1b2c3d4e5f");
        assert_eq!(MgmtAddr::parse_hex("0a1b2c3d4e5f"), Some(a));
        assert_eq!(MgmtAddr::parse_hex("xyz"), None);
    }

    #[test]
    fn host_addr_embeds_id() {
        let h = HostId(4097);
        assert_eq!(HostAddr::of(h).host(), h);
    }
}
