"""Mutual-impedance description of the coupled two-element array.

The array is treated as a two-port with an open-circuit impedance
matrix; that matrix (plus the source impedance) is the only physical
input the load synthesis needs.  A measured fixture for a half-eighth-
wavelength-spaced pair ships as the default dataset.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class AntennaZMatrix:
    """Reciprocal, passive 2x2 mutual-impedance matrix in ohms."""

    z11: complex
    z12: complex
    z21: complex
    z22: complex
    z0: float = 50.0

    def __post_init__(self):
        if self.z12 != self.z21:
            raise ValidationError(f"non-reciprocal Z matrix: Z12={self.z12} Z21={self.z21}")
        if self.z11.real <= 0.0 or self.z22.real <= 0.0:
            raise ValidationError("non-passive Z matrix: Re(Z11) and Re(Z22) must be > 0")
        if not self.z0 > 0.0:
            raise ValidationError(f"reference impedance must be positive, got {self.z0}")

    @classmethod
    def symmetric(cls, z_self: complex, z_mutual: complex, z0: float = 50.0) -> "AntennaZMatrix":
        """Convenience constructor for a symmetric pair (Z11=Z22, Z12=Z21)."""
        return cls(z11=z_self, z12=z_mutual, z21=z_mutual, z22=z_self, z0=z0)

    def normalized(self):
        """2x2 nested tuple of Z entries divided by the reference impedance."""
        return (
            (self.z11 / self.z0, self.z12 / self.z0),
            (self.z21 / self.z0, self.z22 / self.z0),
        )

    def to_json_dict(self) -> dict:
        def _c(z: complex) -> dict:
            return {"re": z.real, "im": z.imag}

        return {
            "z0_ohm": self.z0,
            "z": [[_c(self.z11), _c(self.z12)], [_c(self.z21), _c(self.z22)]],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "AntennaZMatrix":
        """Parse the document schema {"z0_ohm": .., "z": [[{re,im},..],..]}."""
        try:
            z0 = float(doc["z0_ohm"])
            rows = doc["z"]
            entries = [complex(cell["re"], cell["im"]) for row in rows for cell in row]
            if len(entries) != 4:
                raise ValidationError("z must be a 2x2 matrix")
        except (KeyError, TypeError, IndexError) as exc:
            raise ValidationError(f"malformed Z-matrix document: {exc}") from exc
        return cls(z11=entries[0], z12=entries[1], z21=entries[2], z22=entries[3], z0=z0)


def reference_fixture() -> AntennaZMatrix:
    """Measured Z matrix of the default lambda/8-spaced coupled pair.

    Z11 = Z22 = 46.09 - j12.18 ohm, Z12 = Z21 = 18.36 - j29.92 ohm,
    against a 50 ohm source.  All regression tables in this package are
    computed for this fixture.
    """
    return AntennaZMatrix.symmetric(
        z_self=complex(46.09, -12.18),
        z_mutual=complex(18.36, -29.92),
        z0=50.0,
    )
