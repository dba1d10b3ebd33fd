from .galois_field import GaloisField, FieldElement, field_create, tower_create
