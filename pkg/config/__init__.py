# Config Package: settings and catalog defaults
