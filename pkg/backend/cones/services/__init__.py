# Cone services
from .cone import Cone, extract_cones, extract_cone, largest_cone, cone_to_circuit, insertion_order

__all__ = ['Cone', 'extract_cones', 'extract_cone', 'largest_cone', 'cone_to_circuit', 'insertion_order']
