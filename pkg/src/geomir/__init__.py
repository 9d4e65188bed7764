"""geomir: scene retrieval with edge-direction color histograms, SOM
clustering and a geo-grouped force-directed presentation."""

__version__ = "0.1.0"
