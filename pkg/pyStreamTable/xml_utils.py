"""
Description: This module serializes SVG element trees built with xml.etree.
Author: pyStreamTable contributors
Date Created: 2026/10/12
Date Modified: 2026/10/17
Version: 1.0
License: MIT License
"""

import xml.etree.ElementTree as ET
from typing import Optional

SVG_NAMESPACE = "http://www.w3.org/2000/svg"


def sub_element(parent: ET.Element, tag: str, text: Optional[str] = None, **attributes) -> ET.Element:
    """
    Append a child whose attribute names may use '_' for '-' (``stroke_width``).
    Attributes that are None are left out.
    """
    element = ET.SubElement(parent, tag, {
        k.rstrip("_").replace("_", "-"): str(v) for k, v in attributes.items() if v is not None
    })
    if text is not None:
        element.text = text
    return element


def svg_to_string(root: ET.Element, xml_declaration: bool = True, encoding: str = "utf-8") -> str:
    """
    Serialize an SVG root element to text, optionally preceded by an XML declaration
    naming ``encoding``.
    """
    root.set("xmlns", SVG_NAMESPACE)
    ET.indent(root)
    body = ET.tostring(root, encoding="unicode", short_empty_elements=True)
    if xml_declaration:
        return f"<?xml version='1.0' encoding='{encoding}'?>\n{body}\n"
    return body + "\n"
