"""
File exporters: horosphere meshes (OBJ, CSV) and the C convexity region (CSV, SVG)

Output is deterministic: floats are written with a fixed format and the SVG
carries no date and a fixed hash salt.
"""

import csv
import logging
from pathlib import Path
from typing import Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from cusp_atlas.core.curvature import Mesh  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class ExportService:
    """Writes meshes and region grids to disk"""

    def __init__(self, precision: int = 12):
        self.precision = precision

    def _fmt(self, x: float) -> str:
        return f"{x:.{self.precision}g}"

    def write_obj(self, mesh: Mesh, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as f:
            if mesh.height is not None:
                f.write(f"# leaf height {self._fmt(mesh.height)}\n")
            for v in mesh.vertices:
                f.write("v " + " ".join(self._fmt(x) for x in v) + "\n")
            for quad in mesh.quads:
                # OBJ indices are 1-based
                f.write("f " + " ".join(str(i + 1) for i in quad) + "\n")
        logger.info(f"wrote {len(mesh.vertices)} vertices to {path}")
        return path

    def write_mesh_csv(self, mesh: Mesh, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["index", "x", "y", "z"])
            for i, v in enumerate(mesh.vertices):
                writer.writerow([i] + [self._fmt(x) for x in v])
        logger.info(f"wrote mesh csv to {path}")
        return path

    def write_region_csv(self, r: np.ndarray, s: np.ndarray, grid: np.ndarray, path: PathLike) -> Path:
        """One row per grid point: r, s, convex (0/1)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["r", "s", "convex"])
            for i, s_value in enumerate(s):
                for j, r_value in enumerate(r):
                    writer.writerow([self._fmt(r_value), self._fmt(s_value), int(grid[i, j])])
        logger.info(f"wrote region csv to {path}")
        return path

    def write_region_svg(self, r: np.ndarray, s: np.ndarray, grid: np.ndarray, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with matplotlib.rc_context({"svg.hashsalt": "cusp-atlas", "svg.fonttype": "none"}):
            fig, ax = plt.subplots(figsize=(5.0, 5.0))
            ax.imshow(
                grid.astype(float),
                origin="lower",
                extent=(float(r[0]), float(r[-1]), float(s[0]), float(s[-1])),
                cmap="Greys",
                vmin=0.0,
                vmax=1.0,
                interpolation="nearest",
            )
            ax.set_xlabel("r")
            ax.set_ylabel("s")
            ax.set_title("convex C planes [r:s:1]")
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
        logger.info(f"wrote region svg to {path}")
        return path
