// Elbow schematic: two stick arms animated from pos_l/pos_r.

export interface ArmPose {
  posL: number | null; // elbow flexion, degrees; null when unknown
  posR: number | null;
  powerLost: boolean;
}

function drawArm(
  ctx: CanvasRenderingContext2D,
  cx: number,
  cy: number,
  theta: number | null,
  color: string,
  label: string,
): void {
  const upper = 55;
  const fore = 50;

  ctx.strokeStyle = color;
  ctx.fillStyle = color;
  ctx.lineWidth = 5;
  ctx.lineCap = "round";

  // upper arm hangs straight down from the shoulder
  ctx.beginPath();
  ctx.moveTo(cx, cy);
  ctx.lineTo(cx, cy + upper);
  ctx.stroke();

  const ex = cx;
  const ey = cy + upper;
  if (theta !== null) {
    // flexion 0 = forearm continues straight down, 150 = folded up
    const rad = ((180 - theta) * Math.PI) / 180;
    const fx = ex + fore * Math.sin(rad) * (label === "L" ? -1 : 1);
    const fy = ey - fore * Math.cos(rad);
    ctx.beginPath();
    ctx.moveTo(ex, ey);
    ctx.lineTo(fx, fy);
    ctx.stroke();
  }

  ctx.beginPath();
  ctx.arc(ex, ey, 4, 0, 2 * Math.PI);
  ctx.fill();

  ctx.font = "12px sans-serif";
  ctx.fillText(label, cx - 4, cy - 8);
}

export function drawSchematic(canvas: HTMLCanvasElement, pose: ArmPose): void {
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#101018";
  ctx.fillRect(0, 0, canvas.width, canvas.height);

  const color = pose.powerLost ? "#555566" : "#9bff9b";
  drawArm(ctx, canvas.width / 2 - 45, 30, pose.powerLost ? null : pose.posL,
          color, "L");
  drawArm(ctx, canvas.width / 2 + 45, 30, pose.powerLost ? null : pose.posR,
          color, "R");

  if (pose.powerLost) {
    ctx.fillStyle = "#ff6b6b";
    ctx.font = "bold 13px sans-serif";
    ctx.textAlign = "center";
    ctx.fillText("no data (power loss)", canvas.width / 2,
                 canvas.height - 10);
    ctx.textAlign = "start";
  }
}
