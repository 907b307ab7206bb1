"""auditlab: TPA / ZKPA cloud-storage auditing and the attacks that break them."""

__version__ = "0.1.0"
