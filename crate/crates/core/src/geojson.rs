//! GeoJSON rendering of a solution: zone points tagged by role and one
//! LineString per routed demand pair.

use std::collections::{BTreeSet, HashMap};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{HubSolution, ProblemInstance, RouteKind, Zone, ZoneId};

fn point(zone: &Zone, role: &str) -> Value {
    json!({
        "type": "Feature",
        "geometry": { "type": "Point", "coordinates": [zone.lon, zone.lat] },
        "properties": { "zone_id": zone.id, "name": zone.name, "role": role },
    })
}

pub fn solution_feature_collection(instance: &ProblemInstance, solution: &HubSolution) -> Result<Value> {
    let zones: HashMap<ZoneId, &Zone> = instance.origins.iter().chain(&instance.airports).map(|z| (z.id, z)).collect();
    let lookup = |id: ZoneId| {
        zones
            .get(&id)
            .copied()
            .ok_or_else(|| Error::Data(format!("solution references zone {id} absent from the instance")))
    };
    let hubs: BTreeSet<ZoneId> = solution.hubs.iter().copied().collect();

    let mut features = Vec::new();
    for z in &instance.origins {
        features.push(point(z, if hubs.contains(&z.id) { "hub" } else { "origin" }));
    }
    for z in &instance.airports {
        features.push(point(z, "airport"));
    }
    for r in &solution.routing {
        let origin = lookup(r.origin)?;
        let airport = lookup(r.airport)?;
        let mut coords = vec![json!([origin.lon, origin.lat])];
        if r.route.kind == RouteKind::ViaHub {
            let hub_id = r
                .route
                .hub
                .ok_or_else(|| Error::Data(format!("VIA_HUB route {} -> {} has no hub", r.origin, r.airport)))?;
            let hub = lookup(hub_id)?;
            coords.push(json!([hub.lon, hub.lat]));
        }
        coords.push(json!([airport.lon, airport.lat]));
        features.push(json!({
            "type": "Feature",
            "geometry": { "type": "LineString", "coordinates": coords },
            "properties": {
                "origin": r.origin,
                "hub": r.route.hub,
                "airport": r.airport,
                "demand": r.demand,
                "cost": r.route.cost,
                "kind": r.route.kind,
            },
        }));
    }
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}
