from .bundle import GeometryBundle, build_geometry, load_geometry, save_geometry
