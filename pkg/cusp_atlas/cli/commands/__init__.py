from cusp_atlas.cli.commands import classify, curvature, mesh, normalize, orbit_closure, region, verify

COMMANDS = [classify, normalize, curvature, orbit_closure, region, mesh, verify]
