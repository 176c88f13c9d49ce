"""scamlens: offline forensics for arbitrage-bot contract scams.

Subpackages/modules map onto the pipeline stages: solidity (frontend),
deob (sink finding and address recovery), similarity (clone matching),
chain (transaction store and address expansion), victims (loss
accounting), clusters (entity grouping), triage (video-metadata
classifier), cli (orchestration).
"""

__version__ = "0.1.0"
