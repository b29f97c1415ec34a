import * as THREE from 'three';

import type { SolutionBlock } from './api.js';

/** Material tint per block type; hull pieces share one shell colour. */
export const BLOCK_COLOURS: Record<string, number> = {
  cockpit: 0xf2c14e,
  reactor: 0xe4572e,
  thruster: 0x29b6f6,
  body: 0x8d99ae,
  corridor: 0xb8c0d0,
  container: 0x6d8a5e,
};

const HULL_COLOUR = 0x4a5568;

export function blockColour(type: string): number {
  return BLOCK_COLOURS[type] ?? HULL_COLOUR;
}

/**
 * 3D voxel preview. Owns a three.js scene with one cube mesh per block
 * and a drag-to-orbit camera. The WebGL renderer is optional: in a
 * headless DOM (or a browser without WebGL) the scene graph still
 * builds, so tests can audit it, and the canvas shows nothing.
 */
export class VoxelScene {
  readonly scene: THREE.Scene;
  private readonly camera: THREE.PerspectiveCamera;
  private readonly blockGroup: THREE.Group;
  private renderer: THREE.WebGLRenderer | null = null;
  private orbit = { yaw: 0.8, pitch: 0.5, radius: 10 };

  constructor(canvas: HTMLCanvasElement) {
    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color(0x10141c);
    this.camera = new THREE.PerspectiveCamera(50, 4 / 3, 0.1, 500);
    this.blockGroup = new THREE.Group();
    this.scene.add(this.blockGroup);

    const key = new THREE.DirectionalLight(0xffffff, 2.2);
    key.position.set(3, 5, 4);
    this.scene.add(key);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.6));

    // Headless DOMs lack WebGL entirely: keep the scene graph for
    // auditing, skip drawing.
    if (typeof WebGLRenderingContext !== 'undefined') {
      try {
        this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
        this.renderer.setSize(canvas.clientWidth || 480, canvas.clientHeight || 360, false);
      } catch {
        this.renderer = null; // context creation can still fail at runtime
      }
    }
    this.attachOrbit(canvas);
  }

  get hasRenderer(): boolean {
    return this.renderer !== null;
  }

  /** Number of block meshes currently in the scene. */
  blockCount(): number {
    return this.blockGroup.children.length;
  }

  /** Distinct block types currently in the scene. */
  blockTypes(): Set<string> {
    return new Set(this.blockGroup.children.map((m) => m.userData.type as string));
  }

  /** Replace the displayed ship with the given blocks. */
  showBlocks(blocks: SolutionBlock[]): void {
    this.blockGroup.clear();
    if (blocks.length === 0) {
      this.draw();
      return;
    }

    const centre = new THREE.Vector3();
    for (const b of blocks) centre.add(new THREE.Vector3(b.x, b.y, b.z));
    centre.divideScalar(blocks.length);

    const geometry = new THREE.BoxGeometry(0.95, 0.95, 0.95);
    for (const b of blocks) {
      const material = new THREE.MeshLambertMaterial({ color: blockColour(b.type) });
      const mesh = new THREE.Mesh(geometry, material);
      mesh.position.set(b.x - centre.x, b.y - centre.y, b.z - centre.z);
      mesh.userData.type = b.type;
      this.blockGroup.add(mesh);
    }

    let radius = 1;
    for (const b of blocks) {
      const d = new THREE.Vector3(b.x, b.y, b.z).sub(centre).length();
      radius = Math.max(radius, d);
    }
    this.orbit.radius = radius * 2.5 + 3;
    this.draw();
  }

  private attachOrbit(canvas: HTMLCanvasElement): void {
    let dragging = false;
    let last = { x: 0, y: 0 };
    canvas.addEventListener('pointerdown', (e) => {
      dragging = true;
      last = { x: e.clientX, y: e.clientY };
    });
    canvas.addEventListener('pointerup', () => {
      dragging = false;
    });
    canvas.addEventListener('pointermove', (e) => {
      if (!dragging) return;
      this.orbit.yaw += (e.clientX - last.x) * 0.01;
      this.orbit.pitch = Math.max(
        -1.4,
        Math.min(1.4, this.orbit.pitch + (e.clientY - last.y) * 0.01),
      );
      last = { x: e.clientX, y: e.clientY };
      this.draw();
    });
    canvas.addEventListener('wheel', (e) => {
      e.preventDefault();
      this.orbit.radius = Math.max(2, this.orbit.radius * (e.deltaY > 0 ? 1.1 : 0.9));
      this.draw();
    });
  }

  draw(): void {
    const { yaw, pitch, radius } = this.orbit;
    this.camera.position.set(
      radius * Math.cos(pitch) * Math.sin(yaw),
      radius * Math.sin(pitch),
      radius * Math.cos(pitch) * Math.cos(yaw),
    );
    this.camera.lookAt(0, 0, 0);
    if (this.renderer) {
      this.renderer.render(this.scene, this.camera);
    }
  }
}
