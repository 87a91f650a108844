from latentlab.data.images import (
    ImageManifestEntry,
    load_image,
    load_manifest_images,
    read_image_manifest,
    resize_image,
    save_image,
    write_image_manifest,
)
from latentlab.data.synthetic import (
    contrast_field_images,
    shape_dataset,
    texture_shape_images,
)

__all__ = [
    "ImageManifestEntry",
    "load_image",
    "load_manifest_images",
    "read_image_manifest",
    "resize_image",
    "save_image",
    "write_image_manifest",
    "contrast_field_images",
    "shape_dataset",
    "texture_shape_images",
]
