"""Service configuration: one JSON file plus environment overrides.

Example config file:

.. code-block:: json

    {
      "listen_host": "127.0.0.1",
      "listen_port": 8400,
      "storage_path": "/var/lib/colabel",
      "adapter": "static",
      "quadrant_thresholds": [0.5, 0.5],
      "export_salt": null,
      "ui_path": "frontend/dist"
    }

Environment variables override file values: COLABEL_LISTEN_HOST,
COLABEL_LISTEN_PORT, COLABEL_STORAGE_PATH, COLABEL_ADAPTER,
COLABEL_D_THRESHOLD, COLABEL_C_THRESHOLD, COLABEL_EXPORT_SALT,
COLABEL_UI_PATH.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .errors import ValidationError


@dataclass
class AppConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8400
    storage_path: Optional[str] = None
    adapter: str = "static"
    quadrant_thresholds: tuple[float, float] = (0.5, 0.5)
    export_salt: Optional[str] = None
    ui_path: Optional[str] = None


def load_config(path: Optional[str | Path] = None, env: Optional[Mapping[str, str]] = None) -> AppConfig:
    env = os.environ if env is None else env
    data: dict = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot load config {path}: {exc}")
    cfg = AppConfig(
        listen_host=data.get("listen_host", AppConfig.listen_host),
        listen_port=int(data.get("listen_port", AppConfig.listen_port)),
        storage_path=data.get("storage_path"),
        adapter=data.get("adapter", AppConfig.adapter),
        quadrant_thresholds=tuple(data.get("quadrant_thresholds", AppConfig.quadrant_thresholds)),
        export_salt=data.get("export_salt"),
        ui_path=data.get("ui_path"),
    )
    if "COLABEL_LISTEN_HOST" in env:
        cfg.listen_host = env["COLABEL_LISTEN_HOST"]
    if "COLABEL_LISTEN_PORT" in env:
        cfg.listen_port = int(env["COLABEL_LISTEN_PORT"])
    if "COLABEL_STORAGE_PATH" in env:
        cfg.storage_path = env["COLABEL_STORAGE_PATH"]
    if "COLABEL_ADAPTER" in env:
        cfg.adapter = env["COLABEL_ADAPTER"]
    if "COLABEL_D_THRESHOLD" in env or "COLABEL_C_THRESHOLD" in env:
        d, c = cfg.quadrant_thresholds
        d = float(env.get("COLABEL_D_THRESHOLD", d))
        c = float(env.get("COLABEL_C_THRESHOLD", c))
        cfg.quadrant_thresholds = (d, c)
    if "COLABEL_EXPORT_SALT" in env:
        cfg.export_salt = env["COLABEL_EXPORT_SALT"]
    if "COLABEL_UI_PATH" in env:
        cfg.ui_path = env["COLABEL_UI_PATH"]
    if not (0 < cfg.quadrant_thresholds[0] < 1) or not (0 < cfg.quadrant_thresholds[1] < 1):
        raise ValidationError("quadrant thresholds must lie in (0, 1)")
    return cfg
