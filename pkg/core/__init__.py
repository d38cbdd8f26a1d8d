# Core Package: geometry, models, detectors and report output
