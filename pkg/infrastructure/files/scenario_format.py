"""Scenario files: `bs 0 0`, one `dev <id> <x> <y> <rho>` per device, and `pmax <v>`."""
from pathlib import Path

from pydantic import ValidationError

from domain.core.errors import GraphFormatError
from domain.schemas import Device, WirelessScenario


def parse_scenario(text: str) -> WirelessScenario:
    devices: list[Device] = []
    p_max = None

    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        tag, values = fields[0], fields[1:]
        try:
            if tag == "bs":
                if [float(v) for v in values] != [0.0, 0.0]:
                    raise GraphFormatError("the base station must sit at the origin", number)
            elif tag == "dev" and len(values) == 4:
                devices.append(Device(id=int(values[0]), x=float(values[1]), y=float(values[2]), rho=float(values[3])))
            elif tag == "pmax" and len(values) == 1:
                p_max = float(values[0])
            else:
                raise GraphFormatError(f"malformed record {raw.strip()!r}", number)
        except ValueError as exc:
            raise GraphFormatError(f"bad values in {raw.strip()!r}", number) from exc

    if p_max is None:
        raise GraphFormatError("missing 'pmax' record")
    try:
        return WirelessScenario(devices=tuple(devices), p_max=p_max)
    except ValidationError as exc:
        raise GraphFormatError(exc.errors()[0]["msg"]) from exc


def load_scenario(path: Path) -> WirelessScenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_scenario(text)
